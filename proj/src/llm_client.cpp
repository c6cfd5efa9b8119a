#include <chrono>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <thread>

#include "groundkit/errors.hpp"
#include "groundkit/http_wire.hpp"
#include "groundkit/llm_client.hpp"

namespace groundkit::pred {

std::string base64_encode(const std::uint8_t* data, std::size_t len) {
    static const char tab[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= len; i += 3) {
        const std::uint32_t v = data[i] << 16 | data[i + 1] << 8 | data[i + 2];
        out += tab[v >> 18];
        out += tab[(v >> 12) & 63];
        out += tab[(v >> 6) & 63];
        out += tab[v & 63];
    }
    if (i + 1 == len) {
        const std::uint32_t v = data[i] << 16;
        out += tab[v >> 18];
        out += tab[(v >> 12) & 63];
        out += "==";
    } else if (i + 2 == len) {
        const std::uint32_t v = data[i] << 16 | data[i + 1] << 8;
        out += tab[v >> 18];
        out += tab[(v >> 12) & 63];
        out += tab[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::string chat_request_body(const HttpEndpoint& endpoint, const std::vector<ChatPart>& parts) {
    nlohmann::json content = nlohmann::json::array();
    for (const auto& part : parts) {
        if (part.kind == ChatPart::Kind::Text) {
            content.push_back({{"type", "text"}, {"text", part.text}});
        } else {
            const std::string url =
                "data:image/png;base64," + base64_encode(part.png.data(), part.png.size());
            content.push_back({{"type", "image_url"}, {"image_url", {{"url", url}}}});
        }
    }
    const nlohmann::json body = {
        {"model", endpoint.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", content}}})},
    };
    return body.dump();
}

namespace {

std::string extract_reply_text(const std::string& body) {
    const nlohmann::json resp = nlohmann::json::parse(body, nullptr, false);
    if (resp.is_discarded() || !resp.contains("choices") || !resp["choices"].is_array() ||
        resp["choices"].empty()) {
        throw ParseError("reply is not a chat completion", body);
    }
    const auto& msg = resp["choices"][0]["message"];
    if (!msg.contains("content")) throw ParseError("completion has no message content", body);
    const auto& content = msg["content"];
    if (content.is_string()) return content.get<std::string>();
    if (content.is_array()) {
        // Some servers return the content split back into parts.
        std::string joined;
        for (const auto& part : content) {
            if (part.contains("text") && part["text"].is_string())
                joined += part["text"].get<std::string>();
        }
        return joined;
    }
    throw ParseError("unrecognized message content shape", body);
}

}  // namespace

std::string chat_complete(const HttpEndpoint& endpoint, const std::vector<ChatPart>& parts) {
    const std::string body = chat_request_body(endpoint, parts);

    httplib::Headers headers;
    if (!endpoint.api_key_env.empty()) {
        if (const char* key = std::getenv(endpoint.api_key_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }

    httplib::Client client(endpoint.base_url);
    client.set_connection_timeout(std::chrono::milliseconds(endpoint.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(endpoint.timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(endpoint.timeout_ms));

    std::string last_failure = "no attempt made";
    for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
        if (attempt > 0) {
            const int wait = endpoint.backoff_ms << (attempt - 1);
            std::this_thread::sleep_for(std::chrono::milliseconds(wait));
        }
        auto res = client.Post(endpoint.path, headers, body, "application/json");
        if (!res) {
            last_failure = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 200 && res->status < 300) return extract_reply_text(res->body);
        last_failure = "HTTP " + std::to_string(res->status);
        // Client errors other than rate limiting will not heal on retry.
        if (res->status >= 400 && res->status < 500 && res->status != 429) break;
    }
    throw TransportError(endpoint.base_url + endpoint.path + ": " + last_failure);
}

}  // namespace groundkit::pred
