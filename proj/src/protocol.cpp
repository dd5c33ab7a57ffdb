#include "cobot/protocol.hpp"

#include <boost/beast/core/detail/base64.hpp>

namespace cobot::protocol {

using nlohmann::json;
namespace b64 = boost::beast::detail::base64;

std::string base64_encode(std::string_view bytes) {
  std::string out(b64::encoded_size(bytes.size()), '\0');
  out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error("invalid base64");
  std::size_t pad = 0;
  while (pad < 2 && pad < text.size() && text[text.size() - 1 - pad] == '=') ++pad;
  std::string out(b64::decoded_size(text.size()), '\0');
  const auto [written, read] = b64::decode(out.data(), text.data(), text.size() - pad);
  if (read != text.size() - pad) throw Error("invalid base64");
  out.resize(written);
  return out;
}

json plan_proposed(const CutPlan& plan, const RasterImage* image) {
  return {
      {"type", "plan_proposed"},
      {"plan_id", plan.plan_id()},
      {"revision", plan.revision()},
      {"image_ppm_b64", image ? base64_encode(encode_ppm(*image)) : std::string()},
      {"polylines", polylines_to_json(plan.polylines())},
  };
}

json state(Mode mode, ZoneState zone, LedColor led, double t) {
  return {
      {"type", "state"},
      {"state", std::string(to_string(mode))},
      {"zone", std::string(to_string(zone))},
      {"led", std::string(to_string(led))},
      {"t", t},
  };
}

json assessment(const std::string& plan_id, const CutAssessment& a) {
  return {{"type", "assessment"}, {"plan_id", plan_id}, {"d_px", a.d}, {"psi", a.psi}, {"alert", a.alert}};
}

json error(const std::string& code, const std::string& message) {
  return {{"type", "error"}, {"code", code}, {"message", message}};
}

std::string error_code(const std::string& reason) {
  if (reason == "stale plan") return "stale_plan";
  if (reason == "plan frozen") return "plan_frozen";
  return "edit_rejected";
}

namespace {

Point2 point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("bad message: point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

OperatorAction parse_client(const json& msg) {
  try {
    if (!msg.is_object() || !msg.contains("type")) throw Error("bad message: missing type");
    const auto type = msg.at("type").get<std::string>();
    OperatorAction a;
    if (type == "edit") {
      a.kind = OperatorAction::Kind::Edit;
      a.plan_id = msg.at("plan_id").get<std::string>();
      a.revision = msg.at("revision").get<int>();
      const auto op = msg.at("op").get<std::string>();
      const auto line = msg.value("polyline", std::size_t{0});
      const auto index = msg.at("index").get<std::size_t>();
      if (op == "move") {
        a.edit = MoveWaypoint{line, index, point_from(msg.at("point"))};
      } else if (op == "add") {
        a.edit = AddWaypoint{line, index, point_from(msg.at("point"))};
      } else if (op == "remove") {
        a.edit = RemoveWaypoint{line, index};
      } else {
        throw Error("bad message: unknown op " + op);
      }
    } else if (type == "decision") {
      a.plan_id = msg.at("plan_id").get<std::string>();
      a.revision = msg.at("revision").get<int>();
      const auto action = msg.at("action").get<std::string>();
      if (action == "approve") {
        a.kind = OperatorAction::Kind::Approve;
      } else if (action == "reject") {
        a.kind = OperatorAction::Kind::Reject;
      } else {
        throw Error("bad message: unknown action " + action);
      }
    } else if (type == "inspection_cleared") {
      a.kind = OperatorAction::Kind::InspectionCleared;
    } else if (type == "reset") {
      a.kind = OperatorAction::Kind::Reset;
    } else {
      throw Error("bad message: unknown type " + type);
    }
    return a;
  } catch (const json::exception& e) {
    throw Error(std::string("bad message: ") + e.what());
  }
}

json encode_client(const OperatorAction& a) {
  using K = OperatorAction::Kind;
  switch (a.kind) {
    case K::Approve:
    case K::Reject:
      return {{"type", "decision"},
              {"plan_id", a.plan_id.value_or("")},
              {"revision", a.revision.value_or(0)},
              {"action", a.kind == K::Approve ? "approve" : "reject"}};
    case K::Edit: {
      json j = {{"type", "edit"}, {"plan_id", a.plan_id.value_or("")}, {"revision", a.revision.value_or(0)}};
      std::visit(
          [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            j["polyline"] = e.polyline;
            j["index"] = e.index;
            if constexpr (std::is_same_v<T, RemoveWaypoint>) {
              j["op"] = "remove";
            } else {
              j["op"] = std::is_same_v<T, MoveWaypoint> ? "move" : "add";
              j["point"] = {e.point.x, e.point.y};
            }
          },
          a.edit);
      return j;
    }
    case K::InspectionCleared: return {{"type", "inspection_cleared"}};
    case K::Reset: return {{"type", "reset"}};
    case K::PlaceMeat: break;
  }
  throw Error("command has no wire form");
}

}  // namespace cobot::protocol
