#include "groundkit/prompts.hpp"

#include "groundkit/errors.hpp"

namespace groundkit::prompts {

namespace {
#include "prompt_texts.inc"
}  // namespace

const char* refusal_variant_name(RefusalVariant v) {
    switch (v) {
        case RefusalVariant::V0: return "V0";
        case RefusalVariant::V1: return "V1";
        case RefusalVariant::V2: return "V2";
    }
    return "V0";
}

RefusalVariant refusal_variant_from_name(const std::string& name) {
    for (RefusalVariant v : {RefusalVariant::V0, RefusalVariant::V1, RefusalVariant::V2}) {
        if (name == refusal_variant_name(v)) return v;
    }
    throw ValidationError("unknown refusal prompt variant: " + name);
}

const char* rewrite_strategy_name(RewriteStrategy s) {
    switch (s) {
        case RewriteStrategy::Raw: return "raw";
        case RewriteStrategy::ContextInjection: return "context_injection";
        case RewriteStrategy::SpatioVisual: return "spatio_visual";
        case RewriteStrategy::Disambiguation: return "disambiguation";
        case RewriteStrategy::StructuredOutput: return "structured_output";
        case RewriteStrategy::Hybrid: return "hybrid";
    }
    return "raw";
}

RewriteStrategy rewrite_strategy_from_name(const std::string& name) {
    for (RewriteStrategy s :
         {RewriteStrategy::Raw, RewriteStrategy::ContextInjection, RewriteStrategy::SpatioVisual,
          RewriteStrategy::Disambiguation, RewriteStrategy::StructuredOutput,
          RewriteStrategy::Hybrid}) {
        if (name == rewrite_strategy_name(s)) return s;
    }
    throw ValidationError("unknown rewrite strategy: " + name);
}

std::string_view refusal_template(RefusalVariant v) {
    switch (v) {
        case RefusalVariant::V0: return kRefusalV0;
        case RefusalVariant::V1: return kRefusalV1;
        case RefusalVariant::V2: return kRefusalV2;
    }
    return kRefusalV0;
}

std::string_view rewrite_template(RewriteStrategy s) {
    switch (s) {
        case RewriteStrategy::Raw: return {};
        case RewriteStrategy::ContextInjection: return kRewriteContextInjection;
        case RewriteStrategy::SpatioVisual: return kRewriteSpatioVisual;
        case RewriteStrategy::Disambiguation: return kRewriteDisambiguation;
        case RewriteStrategy::StructuredOutput: return kRewriteStructuredOutput;
        case RewriteStrategy::Hybrid: return kRewriteHybrid;
    }
    return {};
}

std::string render_rewrite(RewriteStrategy s, const std::string& raw_instruction) {
    std::string out(rewrite_template(s));
    const std::string needle = "{raw_instruction}";
    for (std::size_t pos = out.find(needle); pos != std::string::npos;
         pos = out.find(needle, pos + raw_instruction.size())) {
        out.replace(pos, needle.size(), raw_instruction);
    }
    return out;
}

}  // namespace groundkit::prompts
