#include <doctest.h>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <condition_variable>
#include <deque>
#include <thread>

#include "cobot/server.hpp"

using namespace cobot;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace ws = beast::websocket;
using nlohmann::json;

namespace {

class Client {
 public:
  explicit Client(unsigned short port) : ws_(ioc_) {
    asio::ip::tcp::resolver resolver(ioc_);
    asio::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1", "/");
    read_next();
    thread_ = std::thread([this] { ioc_.run(); });
  }

  ~Client() {
    asio::post(ioc_, [this] {
      beast::error_code ec;
      ws_.next_layer().close(ec);
    });
    thread_.join();
  }

  void send(const std::string& text) {
    asio::post(ioc_, [this, text] { ws_.write(asio::buffer(text)); });
  }

  // Next message satisfying `pred`, discarding others; null on timeout.
  template <class Pred>
  json wait_for(Pred pred, std::chrono::milliseconds timeout = std::chrono::seconds(10)) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::unique_lock lock(mu_);
    while (true) {
      while (!inbox_.empty()) {
        json m = json::parse(inbox_.front());
        inbox_.pop_front();
        seen_.push_back(m);
        if (pred(m)) return m;
      }
      if (cv_.wait_until(lock, deadline) == std::cv_status::timeout && inbox_.empty()) return nullptr;
    }
  }

  json wait_type(const std::string& type) {
    return wait_for([&](const json& m) { return m["type"] == type; });
  }

  std::vector<json> seen() {
    std::lock_guard lock(mu_);
    return seen_;
  }

 private:
  void read_next() {
    ws_.async_read(buf_, [this](beast::error_code ec, std::size_t) {
      if (ec) return;
      {
        std::lock_guard lock(mu_);
        inbox_.push_back(beast::buffers_to_string(buf_.data()));
      }
      buf_.consume(buf_.size());
      cv_.notify_all();
      read_next();
    });
  }

  asio::io_context ioc_;
  ws::stream<asio::ip::tcp::socket> ws_;
  beast::flat_buffer buf_;
  std::thread thread_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> inbox_;
  std::vector<json> seen_;
};

struct Served {
  explicit Served(Scenario s, double scale) : session(std::move(s), scale), server(session, 0) {
    session.start();
    thread = std::thread([this] { server.run(); });
  }
  ~Served() {
    server.stop();
    thread.join();
    session.stop();
  }
  LiveSession session;
  ConsoleServer server;
  std::thread thread;
};

}  // namespace

TEST_SUITE("server") {

TEST_CASE("console session over websocket") {
  Scenario s = demo_scenario(DemoCase::TrimWithDrag);
  s.auto_approve_s.reset();
  Served served(s, 20.0);
  REQUIRE(served.server.port() != 0);
  Client console(served.server.port());
  Client watcher(served.server.port());

  json plan = console.wait_type("plan_proposed");
  REQUIRE(!plan.is_null());
  CHECK(plan["revision"] == 0);
  CHECK(!plan["image_ppm_b64"].get<std::string>().empty());
  const std::string id = plan["plan_id"];

  console.send("not json");
  json err = console.wait_type("error");
  REQUIRE(!err.is_null());
  CHECK(err["code"] == "bad_message");

  const json moved = {plan["polylines"][0][0][0].get<double>() + 1.0, plan["polylines"][0][0][1].get<double>()};
  console.send(
      json{{"type", "edit"}, {"plan_id", id}, {"revision", 0}, {"op", "move"}, {"index", 0}, {"point", moved}}.dump());
  plan = console.wait_for([](const json& m) { return m["type"] == "plan_proposed" && m["revision"] == 1; });
  REQUIRE(!plan.is_null());
  CHECK(plan["polylines"][0][0] == moved);

  console.send(json{{"type", "decision"}, {"plan_id", id}, {"revision", 0}, {"action", "approve"}}.dump());
  err = console.wait_type("error");
  REQUIRE(!err.is_null());
  CHECK(err["code"] == "stale_plan");

  console.send(json{{"type", "decision"}, {"plan_id", id}, {"revision", 1}, {"action", "approve"}}.dump());
  CHECK(!console.wait_for([](const json& m) { return m["type"] == "state" && m["state"] == "EXECUTING"; }).is_null());
  const json a = watcher.wait_type("assessment");
  REQUIRE(!a.is_null());
  CHECK(a["alert"] == true);
  CHECK(!watcher.wait_for([](const json& m) { return m["state"] == "AWAITING_INSPECTION"; }).is_null());

  watcher.send(json{{"type", "inspection_cleared"}}.dump());
  CHECK(!console.wait_for([](const json& m) { return m["type"] == "state" && m["state"] == "IDLE"; }).is_null());

  // Errors go only to the sender.
  for (const auto& m : watcher.seen()) CHECK(m["type"] != "error");
  for (const auto& m : console.seen()) {
    if (m["type"] == "state") CHECK(m["led"] == std::string(to_string(led_for(mode_from_string(m["state"].get<std::string>()),
                                                                          zone_from_string(m["zone"].get<std::string>())))));
  }
}

TEST_CASE("late client receives the current plan") {
  Scenario s = demo_scenario(DemoCase::TrimClean);
  s.auto_approve_s.reset();
  Served served(s, 1.0);
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  Client late(served.server.port());
  const json plan = late.wait_type("plan_proposed");
  REQUIRE(!plan.is_null());
  CHECK(plan["plan_id"] == "plan-1");
  CHECK(!late.wait_type("state").is_null());
}

}
