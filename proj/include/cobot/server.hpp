#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cobot/scenario.hpp"
#include "cobot/workcell.hpp"

namespace cobot {

/// A workcell running against the wall clock on its own thread. Console
/// commands are queued through a mutex-guarded inbox and delivered by the
/// engine thread; server messages leave through the sink on that thread.
class LiveSession {
 public:
  using Sink = std::function<void(const std::string& text, int client)>;

  /// `time_scale` simulated seconds elapse per wall-clock second.
  LiveSession(Scenario scenario, double time_scale = 1.0);
  ~LiveSession();
  LiveSession(const LiveSession&) = delete;
  LiveSession& operator=(const LiveSession&) = delete;

  void set_sink(Sink sink);
  void start();
  void stop();

  /// Parses a client message; malformed ones are answered with a
  /// "bad_message" error to that client only.
  void submit_text(const std::string& text, int client);

  /// Latest plan (while awaiting approval) and state messages.
  std::vector<std::string> snapshot() const;

 private:
  void loop();
  void on_message(const nlohmann::json& msg, int client);

  Workcell cell_;
  double time_scale_;
  Sink sink_;
  mutable std::mutex mu_;
  std::vector<std::pair<OperatorAction, int>> inbox_;
  std::string last_plan_;
  std::string last_state_;
  bool awaiting_ = false;
  std::atomic<bool> running_{false};
  std::thread thread_;
};

/// WebSocket endpoint for the operator console (one JSON object per text
/// frame). Port 0 picks an ephemeral port.
class ConsoleServer {
 public:
  ConsoleServer(LiveSession& session, unsigned short port, const std::string& address = "127.0.0.1");
  ~ConsoleServer();

  unsigned short port() const;
  /// Serves until stop(); blocks the calling thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cobot
