#include <nlohmann/json.hpp>
#include <regex>
#include <string>

#include "groundkit/errors.hpp"
#include "groundkit/predictor.hpp"

namespace groundkit::pred {

namespace {

// Tries every {...} span in the reply (outermost-first from each opening
// brace) until one parses as an object with numeric x and y. Replies are
// short, so the quadratic scan is irrelevant.
bool try_json_object(const std::string& text, geom::Point& out) {
    for (std::size_t i = text.find('{'); i != std::string::npos; i = text.find('{', i + 1)) {
        for (std::size_t j = text.rfind('}'); j != std::string::npos && j > i;
             j = (j == 0 ? std::string::npos : text.rfind('}', j - 1))) {
            nlohmann::json obj = nlohmann::json::parse(text.substr(i, j - i + 1), nullptr, false);
            if (!obj.is_object()) continue;
            if (obj.contains("x") && obj.contains("y") && obj["x"].is_number() &&
                obj["y"].is_number()) {
                out = {obj["x"].get<double>(), obj["y"].get<double>()};
                return true;
            }
        }
    }
    return false;
}

const char* kNumber = R"([-+]?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)";

bool try_pair(const std::string& text, bool parenthesized, geom::Point& out) {
    const std::string num = "(" + std::string(kNumber) + ")";
    const std::string body = num + R"(\s*,\s*)" + num;
    const std::regex re(parenthesized ? R"(\()" + body + R"(\))" : body);
    std::smatch m;
    if (!std::regex_search(text, m, re)) return false;
    out = {std::stod(m[1].str()), std::stod(m[2].str())};
    return true;
}

}  // namespace

geom::Point parse_point_from_text(const std::string& reply) {
    geom::Point p;
    if (try_json_object(reply, p)) return p;
    if (try_pair(reply, true, p)) return p;
    if (try_pair(reply, false, p)) return p;
    throw ParseError("no coordinate found in model reply", reply);
}

}  // namespace groundkit::pred
