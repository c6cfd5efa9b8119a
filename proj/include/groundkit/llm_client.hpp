#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace groundkit::pred {

// One remote chat-completions endpoint (OpenAI-compatible wire format).
// Secrets never live in config files: api_key_env names the environment
// variable read at call time; empty means anonymous (local stubs).
struct HttpEndpoint {
    std::string base_url;  // scheme://host[:port]
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-4o";
    std::string api_key_env;
    int timeout_ms = 30000;
    int max_retries = 2;   // retries after the first attempt
    int backoff_ms = 250;  // doubles per retry
    // Grounding prompt sent by the HTTP predictor; {instruction} is
    // substituted. Configuration, not a constant: swap it per model family.
    std::string prompt_template =
        "Locate the UI element for the instruction below and reply with the "
        "pixel coordinate of its center as JSON: {\"x\": <number>, \"y\": <number>}.\n"
        "Instruction: {instruction}";
};

struct ChatPart {
    enum class Kind { Text, Image };
    Kind kind = Kind::Text;
    std::string text;
    std::vector<std::uint8_t> png;  // Kind::Image

    static ChatPart from_text(std::string t) { return {Kind::Text, std::move(t), {}}; }
    static ChatPart from_png(std::vector<std::uint8_t> bytes) {
        return {Kind::Image, {}, std::move(bytes)};
    }
};

std::string base64_encode(const std::uint8_t* data, std::size_t len);

// Serializes the request body sent for one user message made of `parts`,
// exactly as chat_complete puts it on the wire (golden-testable).
std::string chat_request_body(const HttpEndpoint& endpoint, const std::vector<ChatPart>& parts);

// Sends one user message and returns the assistant reply text. Retries
// transport-level failures (connect errors, non-2xx) with exponential
// backoff; throws TransportError once the budget is spent and ParseError
// when a 2xx body is not a chat completion.
std::string chat_complete(const HttpEndpoint& endpoint, const std::vector<ChatPart>& parts);

}  // namespace groundkit::pred
