#include "pcs/extract.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "pcs/error.hpp"

namespace pcs {

std::optional<Expr> parse_condition(std::string_view text) {
    try {
        return parse_formula(text);
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

namespace {

std::string strip_comments(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '/') break;
        if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            std::size_t close = text.find("*/", i + 2);
            out.push_back(' ');
            if (close == std::string_view::npos) break;
            i = close + 2;
            continue;
        }
        out.push_back(text[i++]);
    }
    return out;
}

struct Directive {
    std::string keyword;
    std::string argument; // comment-stripped, trimmed
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<Directive> match_directive(std::string_view line) {
    std::string_view rest = trim(line);
    if (rest.empty() || rest.front() != '#') return std::nullopt;
    rest.remove_prefix(1);
    rest = trim(rest);
    std::size_t len = 0;
    while (len < rest.size() && std::isalpha(static_cast<unsigned char>(rest[len]))) ++len;
    std::string keyword(rest.substr(0, len));
    static const char* conditional[] = {"if", "ifdef", "ifndef", "elif", "elifdef",
                                        "elifndef", "else", "endif"};
    if (std::find(std::begin(conditional), std::end(conditional), keyword) ==
        std::end(conditional))
        return std::nullopt;
    std::string argument(trim(strip_comments(rest.substr(len))));
    return Directive{std::move(keyword), std::move(argument)};
}

// One #if/#elif/#else chain. `prior` holds the conditions of the branches
// already passed; nullopt marks a condition that could not be parsed and
// is assumed true (its negation contributes nothing either).
struct Frame {
    std::vector<std::optional<Expr>> prior;
    std::optional<Expr> current;
    bool has_own_condition = true; // false in the #else branch
    bool saw_else = false;
    std::uint32_t opened_line = 0;
};

Expr frame_condition(const Frame& frame) {
    std::vector<Expr> parts;
    for (const std::optional<Expr>& p : frame.prior) {
        if (p) parts.push_back(Expr::negation(*p));
    }
    if (frame.has_own_condition && frame.current) parts.push_back(*frame.current);
    if (parts.empty()) return Expr::constant(true);
    return Expr::conjunction(std::move(parts));
}

Expr stack_condition(const std::vector<Frame>& frames, std::size_t depth) {
    std::vector<Expr> parts;
    for (std::size_t i = 0; i < depth; ++i) {
        Expr c = frame_condition(frames[i]);
        if (c == Expr::constant(true)) continue;
        parts.push_back(std::move(c));
    }
    if (parts.empty()) return Expr::constant(true);
    return Expr::conjunction(std::move(parts));
}

// Scans for /* ... */ spans to know whether the next line starts inside a
// block comment; string literals are not tracked (a directive's '#' must
// be the first non-blank character anyway).
bool update_block_comment(std::string_view line, bool in_comment) {
    std::size_t i = 0;
    while (i < line.size()) {
        if (in_comment) {
            std::size_t close = line.find("*/", i);
            if (close == std::string_view::npos) return true;
            in_comment = false;
            i = close + 2;
        } else {
            std::size_t open = line.find("/*", i);
            std::size_t slashes = line.find("//", i);
            if (slashes != std::string_view::npos &&
                (open == std::string_view::npos || slashes < open))
                return false;
            if (open == std::string_view::npos) return false;
            in_comment = true;
            i = open + 2;
        }
    }
    return in_comment;
}

std::vector<std::string> split_lines(std::string_view source) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < source.size()) lines.emplace_back(source.substr(start));
            break;
        }
        std::string line(source.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

bool ends_with_continuation(std::string_view line) {
    return !line.empty() && line.back() == '\\';
}

} // namespace

FileExtraction extract_source(std::string_view source, std::string_view file_label) {
    FileExtraction result;
    std::vector<std::string> lines = split_lines(source);
    std::vector<Frame> frames;
    bool in_comment = false;
    std::string label(file_label);

    auto fail = [&](std::uint32_t line, const std::string& what) {
        throw ParseError(label + ":" + std::to_string(line) + ": " + what);
    };
    auto warn = [&](std::uint32_t line, std::string what) {
        result.warnings.push_back({label, line, std::move(what)});
    };
    auto emit = [&](std::uint32_t line, std::size_t depth) {
        result.records.push_back({label, line, stack_condition(frames, depth)});
    };

    std::size_t i = 0;
    while (i < lines.size()) {
        std::uint32_t line_no = static_cast<std::uint32_t>(i + 1);
        bool directive_possible = !in_comment;
        std::optional<Directive> directive;
        std::size_t span = 1;
        if (directive_possible) {
            // join continuation lines before matching the directive
            std::string logical = lines[i];
            if (match_directive(logical)) {
                while (ends_with_continuation(logical) && i + span < lines.size()) {
                    logical.pop_back();
                    logical += ' ';
                    logical += lines[i + span];
                    ++span;
                }
                directive = match_directive(logical);
            }
        }
        for (std::size_t j = 0; j < span; ++j)
            in_comment = update_block_comment(lines[i + j], in_comment);

        if (!directive) {
            emit(line_no, frames.size());
            ++i;
            continue;
        }

        const std::string& kw = directive->keyword;
        const std::string& arg = directive->argument;
        auto parse_or_warn = [&](std::string_view text) -> std::optional<Expr> {
            auto expr = parse_condition(text);
            if (!expr)
                warn(line_no, "unparseable condition '" + std::string(trim(text)) +
                                  "', assumed true");
            return expr;
        };
        auto single_atom = [&](bool positive) -> std::optional<Expr> {
            auto expr = parse_or_warn(arg);
            if (!expr) return std::nullopt;
            if (expr->kind() != Expr::Kind::atom) {
                warn(line_no, "expected a single identifier after #" + kw + ", assumed true");
                return std::nullopt;
            }
            return positive ? *expr : Expr::negation(*expr);
        };

        if (kw == "if" || kw == "ifdef" || kw == "ifndef") {
            // the directive line itself lies outside the frame it opens
            for (std::size_t j = 0; j < span; ++j)
                emit(static_cast<std::uint32_t>(i + j + 1), frames.size());
            Frame frame;
            frame.opened_line = line_no;
            if (kw == "if")
                frame.current = parse_or_warn(arg);
            else
                frame.current = single_atom(kw == "ifdef");
            frames.push_back(std::move(frame));
        } else if (kw == "elif" || kw == "elifdef" || kw == "elifndef") {
            if (frames.empty()) fail(line_no, "#" + kw + " without matching #if");
            if (frames.back().saw_else) fail(line_no, "#" + kw + " after #else");
            for (std::size_t j = 0; j < span; ++j)
                emit(static_cast<std::uint32_t>(i + j + 1), frames.size() - 1);
            Frame& frame = frames.back();
            frame.prior.push_back(frame.current);
            if (kw == "elif")
                frame.current = parse_or_warn(arg);
            else
                frame.current = single_atom(kw == "elifdef");
        } else if (kw == "else") {
            if (frames.empty()) fail(line_no, "#else without matching #if");
            if (frames.back().saw_else) fail(line_no, "duplicate #else");
            for (std::size_t j = 0; j < span; ++j)
                emit(static_cast<std::uint32_t>(i + j + 1), frames.size() - 1);
            Frame& frame = frames.back();
            frame.prior.push_back(frame.current);
            frame.current.reset();
            frame.has_own_condition = false;
            frame.saw_else = true;
        } else { // endif
            if (frames.empty()) fail(line_no, "#endif without matching #if");
            frames.pop_back();
            for (std::size_t j = 0; j < span; ++j)
                emit(static_cast<std::uint32_t>(i + j + 1), frames.size());
        }
        i += span;
    }
    if (!frames.empty())
        fail(frames.back().opened_line, "unterminated conditional (missing #endif)");
    return result;
}

FileExtraction extract_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.generic_string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.generic_string());
    return extract_source(buffer.str(), path.generic_string());
}

bool glob_match(std::string_view pattern, std::string_view path) {
    // recursive matcher; '**' may consume path separators, '*'/'?' may not
    if (pattern.empty()) return path.empty();
    if (pattern.substr(0, 2) == "**") {
        std::string_view rest = pattern.substr(2);
        if (!rest.empty() && rest.front() == '/') {
            // "**/" also matches zero directories
            if (glob_match(rest.substr(1), path)) return true;
        }
        for (std::size_t i = 0; i <= path.size(); ++i) {
            if (glob_match(rest, path.substr(i))) return true;
        }
        return false;
    }
    if (pattern.front() == '*') {
        for (std::size_t i = 0; i <= path.size(); ++i) {
            if (glob_match(pattern.substr(1), path.substr(i))) return true;
            if (i < path.size() && path[i] == '/') break;
        }
        return false;
    }
    if (path.empty()) return false;
    if (pattern.front() == '?') return path.front() != '/' && glob_match(pattern.substr(1), path.substr(1));
    return pattern.front() == path.front() && glob_match(pattern.substr(1), path.substr(1));
}

namespace {

bool excluded(const std::string& relative, std::span<const std::string> exclusions) {
    for (const std::string& pattern : exclusions) {
        if (glob_match(pattern, relative)) return true;
        // also exclude everything under a matching directory
        std::string prefix = relative;
        while (true) {
            std::size_t slash = prefix.find_last_of('/');
            if (slash == std::string::npos) break;
            prefix.resize(slash);
            if (glob_match(pattern, prefix)) return true;
        }
    }
    return false;
}

bool source_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    return ext == ".c" || ext == ".h" || ext == ".cxx" || ext == ".hxx";
}

} // namespace

TreeExtraction extract_tree(const std::filesystem::path& root,
                            std::span<const std::string> exclusions) {
    std::error_code ec;
    if (!std::filesystem::exists(root, ec) || ec)
        throw IoError("source root does not exist: " + root.generic_string());

    std::vector<std::string> files;
    auto iter = std::filesystem::recursive_directory_iterator(
        root, std::filesystem::directory_options::skip_permission_denied, ec);
    if (ec) throw IoError("cannot walk " + root.generic_string() + ": " + ec.message());
    for (const auto& entry : iter) {
        if (!entry.is_regular_file(ec) && !entry.is_symlink()) continue;
        if (!source_extension(entry.path())) continue;
        std::string relative =
            std::filesystem::relative(entry.path(), root, ec).generic_string();
        if (ec || relative.empty()) continue;
        if (excluded(relative, exclusions)) continue;
        files.push_back(std::move(relative));
    }
    std::sort(files.begin(), files.end());

    TreeExtraction result;
    result.file_count = files.size();
    for (const std::string& relative : files) {
        try {
            FileExtraction one = extract_file(root / relative);
            for (LinePcRecord& r : one.records) {
                r.file = relative;
                result.records.push_back(std::move(r));
            }
            for (ExtractWarning& w : one.warnings) {
                w.file = relative;
                result.warnings.push_back(std::move(w));
            }
        } catch (const Error& e) {
            result.errors.push_back({relative, e.what()});
        }
    }
    return result;
}

Expr filter_unknown_features(const Expr& expr, const FeatureModel& model,
                             std::set<std::string>& unknown) {
    auto conjunct_known = [&](const Expr& conjunct) {
        std::set<std::string> atoms;
        conjunct.collect_atoms(atoms);
        bool known = true;
        for (const std::string& atom : atoms) {
            if (!model.index_of(atom)) {
                unknown.insert(atom);
                known = false;
            }
        }
        return known;
    };
    if (expr.kind() != Expr::Kind::conjunction)
        return conjunct_known(expr) ? expr : Expr::constant(true);
    std::vector<Expr> kept;
    for (const Expr& conjunct : expr.operands())
        kept.push_back(conjunct_known(conjunct) ? conjunct : Expr::constant(true));
    return Expr::conjunction(std::move(kept));
}

} // namespace pcs
