#include "pcs/core.hpp"

#include <algorithm>
#include <cctype>

#include "pcs/error.hpp"

namespace pcs {

Literal Literal::from_code(std::int32_t code) {
    if (code == 0) throw StructuralError("literal code must be nonzero");
    return Literal(code);
}

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
    if (literals_.empty()) throw StructuralError("clause must not be empty");
    std::sort(literals_.begin(), literals_.end());
    literals_.erase(std::unique(literals_.begin(), literals_.end()), literals_.end());
    for (std::size_t i = 0; i + 1 < literals_.size(); ++i) {
        if (literals_[i].feature() == literals_[i + 1].feature()) {
            contradictory_ = true;
            break;
        }
    }
}

bool Clause::contains(Literal l) const {
    return std::binary_search(literals_.begin(), literals_.end(), l);
}

bool Clause::subset_of(const Clause& other) const {
    return std::includes(other.literals_.begin(), other.literals_.end(),
                         literals_.begin(), literals_.end());
}

Clause Clause::union_with(const Clause& other) const {
    std::vector<Literal> merged;
    merged.reserve(literals_.size() + other.literals_.size());
    std::merge(literals_.begin(), literals_.end(),
               other.literals_.begin(), other.literals_.end(),
               std::back_inserter(merged));
    return Clause(std::move(merged));
}

bool FeatureModel::valid_name(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c))) return false;
        if (c == '!' || c == '&' || c == '|' || c == '(' || c == ')') return false;
    }
    return true;
}

FeatureModel::FeatureModel(std::vector<std::string> names, std::vector<Clause> dependencies)
    : names_(std::move(names)), dependencies_(std::move(dependencies)) {
    for (FeatureIndex i = 1; i <= feature_count(); ++i) {
        const std::string& name = names_[i - 1];
        if (!valid_name(name))
            throw StructuralError("invalid feature name: '" + name + "'");
        if (!index_.emplace(name, i).second)
            throw StructuralError("duplicate feature name: '" + name + "'");
    }
    for (const Clause& clause : dependencies_) {
        if (clause.max_feature() > feature_count())
            throw StructuralError("dependency clause references feature index " +
                                  std::to_string(clause.max_feature()) + " beyond model size " +
                                  std::to_string(feature_count()));
    }
}

std::optional<FeatureIndex> FeatureModel::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (std::byte b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view text, std::uint64_t seed) {
    return fnv1a64(std::as_bytes(std::span(text.data(), text.size())), seed);
}

std::uint64_t FeatureModel::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const std::string& name : names_) {
        h = fnv1a64(name, h);
        h = fnv1a64("\x1f", h);
    }
    for (const Clause& clause : dependencies_) {
        for (Literal l : clause) {
            std::int32_t code = l.code();
            h = fnv1a64(std::as_bytes(std::span(&code, 1)), h);
        }
        h = fnv1a64("\x1e", h);
    }
    return h;
}

std::string Origin::to_string() const {
    if (file.empty()) return {};
    std::string s = file + ":" + std::to_string(first_line);
    if (last_line > first_line) s += "-" + std::to_string(last_line);
    return s;
}

PresenceCondition PresenceCondition::tautology() {
    return PresenceCondition(PcKind::tautology, {});
}

PresenceCondition PresenceCondition::contradiction() {
    return PresenceCondition(PcKind::contradiction, {});
}

PresenceCondition PresenceCondition::of_clauses(std::vector<Clause> clauses) {
    std::sort(clauses.begin(), clauses.end());
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
    if (clauses.empty()) return contradiction();
    return PresenceCondition(PcKind::proper, std::move(clauses));
}

FeatureIndex PresenceCondition::max_feature() const {
    FeatureIndex max = 0;
    for (const Clause& c : clauses_) max = std::max(max, c.max_feature());
    return max;
}

PresenceCondition PresenceCondition::with_origin(Origin origin) const {
    PresenceCondition copy = *this;
    copy.origin_ = std::move(origin);
    return copy;
}

std::optional<Configuration> Configuration::try_from(std::span<const Literal> literals) {
    Configuration config;
    config.literals_.assign(literals.begin(), literals.end());
    std::sort(config.literals_.begin(), config.literals_.end());
    config.literals_.erase(std::unique(config.literals_.begin(), config.literals_.end()),
                           config.literals_.end());
    for (std::size_t i = 0; i + 1 < config.literals_.size(); ++i) {
        if (config.literals_[i].feature() == config.literals_[i + 1].feature())
            return std::nullopt;
    }
    return config;
}

bool Configuration::contains(Literal l) const {
    return std::binary_search(literals_.begin(), literals_.end(), l);
}

std::optional<Literal> Configuration::assignment_for(FeatureIndex feature) const {
    auto it = std::lower_bound(literals_.begin(), literals_.end(), Literal::negative(feature));
    if (it != literals_.end() && it->feature() == feature) return *it;
    return std::nullopt;
}

bool Configuration::includes_all(const Clause& clause) const {
    return std::includes(literals_.begin(), literals_.end(), clause.begin(), clause.end());
}

std::optional<Configuration> Configuration::try_union(const Clause& clause) const {
    for (Literal l : clause) {
        if (contains(l.complement())) return std::nullopt;
    }
    Configuration merged;
    merged.literals_.reserve(literals_.size() + clause.size());
    std::merge(literals_.begin(), literals_.end(), clause.begin(), clause.end(),
               std::back_inserter(merged.literals_));
    merged.literals_.erase(std::unique(merged.literals_.begin(), merged.literals_.end()),
                           merged.literals_.end());
    return merged;
}

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::pc: return "pc";
    case Mode::fm: return "fm";
    case Mode::concrete: return "concrete";
    case Mode::random: return "random";
    }
    return "?";
}

std::optional<Mode> mode_from_string(std::string_view text) {
    if (text == "pc") return Mode::pc;
    if (text == "fm") return Mode::fm;
    if (text == "concrete") return Mode::concrete;
    if (text == "random") return Mode::random;
    return std::nullopt;
}

bool active(const PresenceCondition& pc, const Configuration& config) {
    switch (pc.kind()) {
    case PcKind::tautology: return true;
    case PcKind::contradiction: return false;
    case PcKind::proper: break;
    }
    for (const Clause& clause : pc.clauses()) {
        if (config.includes_all(clause)) return true;
    }
    return false;
}

bool complete(const Configuration& config, const FeatureModel& model) {
    return config.size() == model.feature_count();
}

PresenceCondition canonicalize(const PresenceCondition& pc) {
    if (!pc.is_proper()) return pc;
    // of_clauses re-sorts and dedups; Clause construction already sorted literals.
    auto result = PresenceCondition::of_clauses(pc.clauses());
    if (pc.origin()) result = result.with_origin(*pc.origin());
    return result;
}

void validate_against(const PresenceCondition& pc, const FeatureModel& model) {
    if (pc.max_feature() > model.feature_count())
        throw StructuralError("presence condition references feature index " +
                              std::to_string(pc.max_feature()) + " beyond model size " +
                              std::to_string(model.feature_count()));
}

} // namespace pcs
