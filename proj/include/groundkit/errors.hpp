#pragma once

#include <stdexcept>
#include <string>

namespace groundkit {

// Remote call failed after exhausting retries (or was unreachable).
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A model reply could not be parsed; carries the raw text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string raw)
        : std::runtime_error(what), raw_text(std::move(raw)) {}
    std::string raw_text;
};

// Replay predictor was asked for a step past the recorded trace.
class ReplayExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dataset / config record violates the documented schema.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A result store is corrupt, tampered with, or from an unknown schema.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace groundkit
