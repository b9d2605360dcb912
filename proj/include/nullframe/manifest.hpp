#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nullframe/submanifold.hpp"

namespace nullframe {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

// Parses manifest text (JSON with comments); throws ParseError with line and column.
json parse_manifest_text(const std::string& text);

// Builds and validates a spec. Missing timelike positions are inferred from the claimed radical.
// Throws ValidationError (message starts with the field path), AmbiguousSignature or
// NoConsistentSignature.
ManifoldSpec spec_from_json(const json& doc);

ManifoldSpec load_manifest(const std::string& path);

struct SignatureListing {
  std::string prefix;
  int index = 0;
  bool by_frame_indices = false;  // otherwise candidates are matched on the claimed rad_dim
  std::vector<SignatureCandidate> candidates;
};

// Every placement of `index` minus signs (default: ambient.index) consistent with the claimed
// radical at the domain center; throws NoConsistentSignature when there is none.
SignatureListing infer_manifest_signature(const json& doc, std::optional<int> index = std::nullopt);

// "{z4,z8}" for 0-based positions {3, 7} and prefix "z".
std::string coordinate_list(const std::vector<int>& positions, const std::string& prefix);

std::vector<std::string> builtin_names();
json builtin_manifest(const std::string& name);
ManifoldSpec builtin_example(const std::string& name);

// Loads a file, or a built-in example when no such file exists and the name matches one.
ManifoldSpec load_manifest_or_builtin(const std::string& path_or_name);
json load_document_or_builtin(const std::string& path_or_name);

}  // namespace nullframe
