#pragma once

// In-process chat-completions stub for wire-level tests. Binds an ephemeral
// localhost port, records every request body, and answers from a scripted
// queue (repeating the last entry once drained).

#include <atomic>
#include <mutex>
#include <nlohmann/json.hpp>
#include <string>
#include <thread>
#include <vector>

#include "groundkit/http_wire.hpp"

namespace testsupport {

struct StubReply {
    int status = 200;
    std::string content;  // assistant text placed in choices[0].message.content
};

class StubChatServer {
public:
    explicit StubChatServer(std::vector<StubReply> script) : script_(std::move(script)) {
        server_.Post("/v1/chat/completions",
                     [this](const httplib::Request& req, httplib::Response& res) {
                         StubReply reply;
                         {
                             std::lock_guard<std::mutex> lock(mu_);
                             bodies_.push_back(req.body);
                             auto it = req.headers.find("Authorization");
                             auth_headers_.push_back(it == req.headers.end() ? "" : it->second);
                             const std::size_t i = served_ < script_.size() ? served_
                                                                            : script_.size() - 1;
                             reply = script_[i];
                             ++served_;
                         }
                         if (reply.status != 200) {
                             res.status = reply.status;
                             res.set_content("{\"error\": \"scripted failure\"}",
                                             "application/json");
                             return;
                         }
                         const nlohmann::json body = {
                             {"choices",
                              {{{"message", {{"role", "assistant"}, {"content", reply.content}}}}}},
                         };
                         res.set_content(body.dump(), "application/json");
                     });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubChatServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

    int request_count() {
        std::lock_guard<std::mutex> lock(mu_);
        return int(bodies_.size());
    }

    std::string body(std::size_t i) {
        std::lock_guard<std::mutex> lock(mu_);
        return bodies_.at(i);
    }

    std::string auth_header(std::size_t i) {
        std::lock_guard<std::mutex> lock(mu_);
        return auth_headers_.at(i);
    }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::mutex mu_;
    std::vector<std::string> bodies_;
    std::vector<std::string> auth_headers_;
    std::vector<StubReply> script_;
    std::size_t served_ = 0;
};

}  // namespace testsupport
