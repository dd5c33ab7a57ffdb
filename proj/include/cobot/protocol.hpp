#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

#include "cobot/image.hpp"
#include "cobot/planner.hpp"
#include "cobot/scenario.hpp"
#include "cobot/supervisor.hpp"
#include "cobot/uncertainty.hpp"

// JSON messages exchanged with the operator console, one object per
// WebSocket text frame.
namespace cobot::protocol {

std::string base64_encode(std::string_view bytes);
/// Throws Error("invalid base64").
std::string base64_decode(std::string_view text);

nlohmann::json plan_proposed(const CutPlan& plan, const RasterImage* image);
nlohmann::json state(Mode mode, ZoneState zone, LedColor led, double t);
nlohmann::json assessment(const std::string& plan_id, const CutAssessment& a);
nlohmann::json error(const std::string& code, const std::string& message);

/// Error code for a refused operator command.
std::string error_code(const std::string& reason);

/// Client message to a console command with explicit plan_id / revision
/// where the message carries them. Throws Error("bad message: ...").
OperatorAction parse_client(const nlohmann::json& msg);
nlohmann::json encode_client(const OperatorAction& action);

}  // namespace cobot::protocol
