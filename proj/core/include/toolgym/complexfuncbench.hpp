#pragma once

#include <filesystem>
#include <vector>

#include "toolgym/dataset.hpp"
#include "toolgym/predictions.hpp"

namespace toolgym {

/// Adapter for ComplexFuncBench-style trajectory records:
///
///   {"id": ..., "conversations": [
///      {"role": "user", "content": "..."},
///      {"role": "assistant", "function_call": [{"name": ..., "arguments": {...}}, ...]},
///      {"role": "observation", "content": [<one response per call>]},
///      ...,
///      {"role": "assistant", "content": "final answer"}]}
///
/// Each assistant message with function calls becomes one turn. Dependency
/// edges are inferred: a call depends on an earlier call whose response
/// contains one of its argument values (strings of four or more characters,
/// or floats) verbatim; such arguments are marked as dependency parameters.
DatasetSample cfb_to_sample(const Value& record);
std::vector<DatasetSample> load_cfb_dataset(const std::filesystem::path& file);

/// The same record read as a predicted transcript.
Prediction cfb_to_prediction(const Value& record);

}  // namespace toolgym
