#pragma once

#include <string>
#include <string_view>

namespace groundkit::prompts {

// Feasibility-judgment prompt variants. V0 asks for a bare verdict, V1 adds
// a reasoning field, V2 adds explicit judging rules.
enum class RefusalVariant { V0, V1, V2 };

// Instruction-rewrite strategies. Raw is the identity (no model call);
// Hybrid folds the other four ideas into one prompt and is the default.
enum class RewriteStrategy {
    Raw,
    ContextInjection,
    SpatioVisual,
    Disambiguation,
    StructuredOutput,
    Hybrid,
};

const char* refusal_variant_name(RefusalVariant v);
RefusalVariant refusal_variant_from_name(const std::string& name);  // throws ValidationError
const char* rewrite_strategy_name(RewriteStrategy s);
RewriteStrategy rewrite_strategy_from_name(const std::string& name);  // throws ValidationError

// The verbatim template bytes (also shipped as prompts/*.txt).
std::string_view refusal_template(RefusalVariant v);
std::string_view rewrite_template(RewriteStrategy s);  // Raw -> empty view

// Substitutes every "{raw_instruction}" occurrence; the literal JSON braces
// in the structured templates are left alone.
std::string render_rewrite(RewriteStrategy s, const std::string& raw_instruction);

}  // namespace groundkit::prompts
