#ifndef PCS_EXTRACT_HPP
#define PCS_EXTRACT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcs/core.hpp"
#include "pcs/expr.hpp"

namespace pcs {

/// One line of one source file with its presence condition. Lines outside
/// any conditional block carry the constant true.
struct LinePcRecord {
    std::string file;
    std::uint32_t line = 0; // 1-based physical line
    Expr condition = Expr::constant(true);
};

struct ExtractWarning {
    std::string file;
    std::uint32_t line = 0;
    std::string message;
};

struct ExtractFileError {
    std::string file;
    std::string message;
};

struct FileExtraction {
    std::vector<LinePcRecord> records;
    std::vector<ExtractWarning> warnings;
};

struct TreeExtraction {
    std::vector<LinePcRecord> records;
    std::vector<ExtractWarning> warnings;
    std::vector<ExtractFileError> errors;
    std::size_t file_count = 0;
};

/// Parses the argument of an #if/#elif directive. Supports identifiers,
/// defined(X) / defined X, !, &&, ||, parentheses and integer constants
/// (0 is false, anything else true). Comparisons, arithmetic and
/// function-like macro calls make the condition unparseable -> nullopt.
std::optional<Expr> parse_condition(std::string_view text);

/// Extracts one presence condition per physical line. Throws ParseError
/// on malformed conditional structure (stray #endif/#else/#elif,
/// unterminated #if) and IoError when the file cannot be read.
FileExtraction extract_file(const std::filesystem::path& path);

/// Same, over in-memory text. `file_label` is recorded on every record.
FileExtraction extract_source(std::string_view source, std::string_view file_label);

/// Walks root for .c/.h/.cxx/.hxx files outside the excluded globs, in
/// lexicographic order of their relative paths. Per-file failures land in
/// `errors`; extraction continues.
TreeExtraction extract_tree(const std::filesystem::path& root,
                            std::span<const std::string> exclusions);

/// Glob match: `*` and `?` do not cross '/', `**` does.
bool glob_match(std::string_view pattern, std::string_view path);

/// Replaces every top-level conjunct that mentions a feature absent from
/// the model with the constant true, collecting the unknown names.
Expr filter_unknown_features(const Expr& expr, const FeatureModel& model,
                             std::set<std::string>& unknown);

} // namespace pcs

#endif
