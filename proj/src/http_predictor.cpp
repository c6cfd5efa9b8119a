#include <string>

#include "groundkit/errors.hpp"
#include "groundkit/llm_client.hpp"
#include "groundkit/predictor.hpp"

namespace groundkit::pred {

namespace {

std::string substitute(std::string text, const std::string& key, const std::string& value) {
    const std::string needle = "{" + key + "}";
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + value.size())) {
        text.replace(pos, needle.size(), value);
    }
    return text;
}

class HttpPredictor : public Predictor {
public:
    explicit HttpPredictor(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    PredictorCaps caps() const override { return {"http:" + endpoint_.model, true, true}; }

    geom::Point predict(const PredictQuery& q) override {
        if (q.pixels == nullptr) {
            throw ValidationError("http predictor needs the crop raster (pixels missing)");
        }
        const std::string prompt =
            substitute(endpoint_.prompt_template, "instruction", q.instruction);
        const std::string reply = chat_complete(
            endpoint_, {ChatPart::from_text(prompt), ChatPart::from_png(img::encode_png(*q.pixels))});
        return parse_point_from_text(reply);
    }

private:
    HttpEndpoint endpoint_;
};

}  // namespace

std::unique_ptr<Predictor> make_http_predictor(const HttpEndpoint& endpoint) {
    return std::make_unique<HttpPredictor>(endpoint);
}

}  // namespace groundkit::pred
