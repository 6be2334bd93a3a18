#pragma once

#include <json.hpp>

#include "nht/certify.hpp"
#include "nht/nielsen.hpp"

namespace nht {

using ordered_json = nlohmann::ordered_json;

ordered_json point_to_json(const Point& p);
Point point_from_json(const ordered_json& j, ModelKind kind);

ordered_json isometry_to_json(const Isometry& g);
Isometry isometry_from_json(const ordered_json& j, ModelKind kind, NumMode mode);

ordered_json move_to_json(const Move& m);
Move move_from_json(const ordered_json& j);
ordered_json chain_to_json(const MoveChain& c);
MoveChain chain_from_json(const ordered_json& j);

ordered_json model_to_json(const SpaceModel& m);
SpaceModel model_from_json(const ordered_json& j);

ordered_json certificate_to_json(const FreeCertificate& c);
ordered_json probe_to_json(const QiProbe& p);
ordered_json predicates_to_json(const PredicateReport& r);

}  // namespace nht
