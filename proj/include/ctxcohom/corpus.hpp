#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ctxcohom/model_io.hpp"

namespace ctxcohom {

/// Built-in fixtures: hardy, prbox, sc-not-clc-224, ks-7.
const std::vector<ModelDocument>& corpus();
std::optional<ModelDocument> corpus_document(std::string_view name);
/// Throws InvalidArgument for an unknown name.
EmpiricalModel corpus_model(std::string_view name);

}  // namespace ctxcohom
