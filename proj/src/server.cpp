#include "cobot/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <cmath>
#include <deque>
#include <map>

#include "cobot/protocol.hpp"

namespace cobot {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

LiveSession::LiveSession(Scenario scenario, double time_scale)
    : cell_(std::move(scenario)), time_scale_(time_scale) {
  if (!(time_scale_ > 0.0)) throw Error("time scale must be positive");
  cell_.set_listener([this](const nlohmann::json& msg, int client) { on_message(msg, client); });
}

LiveSession::~LiveSession() { stop(); }

void LiveSession::set_sink(Sink sink) {
  std::lock_guard lock(mu_);
  sink_ = std::move(sink);
}

void LiveSession::start() {
  if (running_.exchange(true)) return;
  thread_ = std::thread([this] { loop(); });
}

void LiveSession::stop() {
  running_ = false;
  if (thread_.joinable()) thread_.join();
}

void LiveSession::submit_text(const std::string& text, int client) {
  try {
    OperatorAction a = protocol::parse_client(nlohmann::json::parse(text));
    std::lock_guard lock(mu_);
    inbox_.emplace_back(std::move(a), client);
  } catch (const std::exception& e) {
    Sink sink;
    {
      std::lock_guard lock(mu_);
      sink = sink_;
    }
    if (sink) sink(protocol::error("bad_message", e.what()).dump(), client);
  }
}

std::vector<std::string> LiveSession::snapshot() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  if (awaiting_ && !last_plan_.empty()) out.push_back(last_plan_);
  if (!last_state_.empty()) out.push_back(last_state_);
  return out;
}

void LiveSession::on_message(const nlohmann::json& msg, int client) {
  const std::string text = msg.dump();
  Sink sink;
  {
    std::lock_guard lock(mu_);
    const std::string type = msg.value("type", "");
    if (type == "plan_proposed") last_plan_ = text;
    if (type == "state") {
      last_state_ = text;
      awaiting_ = msg.value("state", "") == "AWAITING_APPROVAL";
    }
    sink = sink_;
  }
  if (sink) sink(text, client);
}

void LiveSession::loop() {
  const auto start = std::chrono::steady_clock::now();
  const double base = static_cast<double>(cell_.units_per_second());
  while (running_) {
    std::vector<std::pair<OperatorAction, int>> batch;
    {
      std::lock_guard lock(mu_);
      batch.swap(inbox_);
    }
    for (const auto& [a, client] : batch) cell_.submit(a, client);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    cell_.advance_to(static_cast<std::int64_t>(std::floor(wall * time_scale_ * base)));
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
}

// ---------------------------------------------------------------------------

struct ConsoleServer::Impl {
  class Client;

  Impl(LiveSession& s, unsigned short port, const std::string& address)
      : session(s), acceptor(ioc, tcp::endpoint(asio::ip::make_address(address), port)) {}

  void accept();
  void deliver(const std::string& text, int client);

  LiveSession& session;
  asio::io_context ioc;
  tcp::acceptor acceptor;
  std::map<int, std::shared_ptr<Client>> clients;
  int next_id = 0;
};

class ConsoleServer::Impl::Client : public std::enable_shared_from_this<Client> {
 public:
  Client(Impl& server, tcp::socket socket, int id) : server_(server), ws_(std::move(socket)), id_(id) {}

  void start() {
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->server_.clients[self->id_] = self;
      for (const auto& text : self->server_.session.snapshot()) self->send(text);
      self->read();
    });
  }

  void send(std::string text) {
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write();
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->server_.clients.erase(self->id_);
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->server_.session.submit_text(text, self->id_);
      self->read();
    });
  }

  void write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->server_.clients.erase(self->id_);
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write();
    });
  }

  Impl& server_;
  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  int id_;
};

void ConsoleServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<Client>(*this, std::move(socket), next_id++)->start();
    accept();
  });
}

void ConsoleServer::Impl::deliver(const std::string& text, int client) {
  if (client >= 0) {
    if (auto it = clients.find(client); it != clients.end()) it->second->send(text);
    return;
  }
  for (auto& [id, c] : clients) c->send(text);
}

ConsoleServer::ConsoleServer(LiveSession& session, unsigned short port, const std::string& address)
    : impl_(std::make_unique<Impl>(session, port, address)) {
  Impl* impl = impl_.get();
  session.set_sink([impl](const std::string& text, int client) {
    asio::post(impl->ioc, [impl, text, client] { impl->deliver(text, client); });
  });
  impl_->accept();
}

ConsoleServer::~ConsoleServer() {
  impl_->session.set_sink(nullptr);
  stop();
}

unsigned short ConsoleServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void ConsoleServer::run() { impl_->ioc.run(); }

void ConsoleServer::stop() { impl_->ioc.stop(); }

}  // namespace cobot
