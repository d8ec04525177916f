#ifndef PCS_CORE_HPP
#define PCS_CORE_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pcs {

/// 1-based dense feature index into a FeatureModel.
using FeatureIndex = std::uint32_t;

/// A signed feature reference. Encoded as +index (selected) or
/// -index (deselected), so a Literal is trivially orderable and hashable.
class Literal {
public:
    Literal() = default;
    static Literal positive(FeatureIndex feature) { return Literal(static_cast<std::int32_t>(feature)); }
    static Literal negative(FeatureIndex feature) { return Literal(-static_cast<std::int32_t>(feature)); }
    static Literal from_code(std::int32_t code);

    FeatureIndex feature() const { return static_cast<FeatureIndex>(code_ < 0 ? -code_ : code_); }
    bool is_positive() const { return code_ > 0; }
    Literal complement() const { return Literal(-code_); }
    std::int32_t code() const { return code_; }

    bool operator==(const Literal&) const = default;
    // Canonical order: by feature index, negative polarity first.
    std::strong_ordering operator<=>(const Literal& other) const {
        if (auto c = feature() <=> other.feature(); c != 0) return c;
        return is_positive() <=> other.is_positive();
    }

private:
    explicit Literal(std::int32_t code) : code_(code) {}
    std::int32_t code_ = 0;
};

/// A nonempty set of literals, canonically ordered, no duplicates.
/// Serves both as a CNF clause (disjunction) in a FeatureModel and as a
/// DNF conjunctive clause in a PresenceCondition. A clause may contain a
/// literal and its complement; such clauses are legal to construct and are
/// flagged contradictory (simplification removes them).
class Clause {
public:
    explicit Clause(std::vector<Literal> literals);

    const std::vector<Literal>& literals() const { return literals_; }
    std::size_t size() const { return literals_.size(); }
    bool contains(Literal l) const;
    bool contradictory() const { return contradictory_; }
    /// True iff every literal of this clause appears in `other`.
    bool subset_of(const Clause& other) const;
    Clause union_with(const Clause& other) const;
    FeatureIndex max_feature() const { return literals_.back().feature(); }

    auto begin() const { return literals_.begin(); }
    auto end() const { return literals_.end(); }

    bool operator==(const Clause&) const = default;
    auto operator<=>(const Clause&) const = default;

private:
    std::vector<Literal> literals_; // sorted, unique
    bool contradictory_ = false;
};

/// Feature list plus CNF dependency clauses: each clause is a disjunction
/// that every complete configuration must satisfy.
class FeatureModel {
public:
    FeatureModel() = default;
    FeatureModel(std::vector<std::string> names, std::vector<Clause> dependencies);

    FeatureIndex feature_count() const { return static_cast<FeatureIndex>(names_.size()); }
    const std::string& name_of(FeatureIndex i) const { return names_.at(i - 1); }
    std::optional<FeatureIndex> index_of(std::string_view name) const;
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<Clause>& dependencies() const { return dependencies_; }

    /// Stable content checksum (names + clauses), used as Sample provenance.
    std::uint64_t hash() const;

    static bool valid_name(std::string_view name);

private:
    std::vector<std::string> names_;
    std::vector<Clause> dependencies_;
    std::unordered_map<std::string, FeatureIndex> index_;
};

/// Source tag of an extracted condition. Metadata only: never part of a
/// condition's identity.
struct Origin {
    std::string file;
    std::uint32_t first_line = 0;
    std::uint32_t last_line = 0;

    std::string to_string() const;
};

enum class PcKind { tautology, contradiction, proper };

/// A presence condition in DNF: a disjunction of conjunctive clauses.
/// The constants true/false are represented as kinds, never as literals:
/// a tautology has kind tautology, an empty disjunction is the
/// contradiction. Proper conditions keep their clauses sorted and unique.
class PresenceCondition {
public:
    static PresenceCondition tautology();
    static PresenceCondition contradiction();
    /// Builds a canonical condition from arbitrary clauses (sorts and
    /// dedups; empty input yields the contradiction). Clauses are kept
    /// as given otherwise, including contradictory ones.
    static PresenceCondition of_clauses(std::vector<Clause> clauses);

    PcKind kind() const { return kind_; }
    bool is_tautology() const { return kind_ == PcKind::tautology; }
    bool is_contradiction() const { return kind_ == PcKind::contradiction; }
    bool is_proper() const { return kind_ == PcKind::proper; }
    const std::vector<Clause>& clauses() const { return clauses_; }
    FeatureIndex max_feature() const;

    const std::optional<Origin>& origin() const { return origin_; }
    PresenceCondition with_origin(Origin origin) const;

    // Identity is kind + clauses; origin is carried along but ignored.
    bool operator==(const PresenceCondition& other) const {
        return kind_ == other.kind_ && clauses_ == other.clauses_;
    }
    auto operator<=>(const PresenceCondition& other) const {
        if (auto c = kind_ <=> other.kind_; c != 0) return c;
        return clauses_ <=> other.clauses_;
    }

private:
    PresenceCondition(PcKind kind, std::vector<Clause> clauses)
        : kind_(kind), clauses_(std::move(clauses)) {}
    PcKind kind_ = PcKind::contradiction;
    std::vector<Clause> clauses_;
    std::optional<Origin> origin_;
};

/// A consistent set of literals: at most one polarity per feature.
/// Contradictory configurations are unrepresentable; all mutating paths
/// go through try_* factories that refuse complementary literals.
class Configuration {
public:
    Configuration() = default;
    static std::optional<Configuration> try_from(std::span<const Literal> literals);

    std::size_t size() const { return literals_.size(); }
    bool empty() const { return literals_.empty(); }
    bool contains(Literal l) const;
    std::optional<Literal> assignment_for(FeatureIndex feature) const;
    /// True iff every literal of the clause is present.
    bool includes_all(const Clause& clause) const;
    /// Union with a clause; nullopt if any literal clashes with an
    /// existing assignment.
    std::optional<Configuration> try_union(const Clause& clause) const;

    const std::vector<Literal>& literals() const { return literals_; }
    auto begin() const { return literals_.begin(); }
    auto end() const { return literals_.end(); }

    bool operator==(const Configuration&) const = default;
    auto operator<=>(const Configuration&) const = default;

private:
    std::vector<Literal> literals_; // sorted by feature, one per feature
};

enum class Mode { pc, fm, concrete, random };

std::string_view to_string(Mode mode);
std::optional<Mode> mode_from_string(std::string_view text);

/// An ordered list of configurations plus provenance. Once finalized by a
/// sampler, every configuration is complete and valid for the model whose
/// hash is recorded.
struct Sample {
    std::uint64_t model_hash = 0;
    std::uint32_t t = 0;
    Mode mode = Mode::pc;
    std::vector<Configuration> configurations;
};

/// Definite activation: some DNF clause is contained in the configuration.
/// For partial configurations this is "definitely active".
bool active(const PresenceCondition& pc, const Configuration& config);

/// True iff every feature of the model is assigned.
bool complete(const Configuration& config, const FeatureModel& model);

/// Sorts clauses and literals, merges duplicate clauses. Semantics
/// preserving; idempotent.
PresenceCondition canonicalize(const PresenceCondition& pc);

/// Raises StructuralError if the condition references a feature index
/// beyond the model.
void validate_against(const PresenceCondition& pc, const FeatureModel& model);

std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a64(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ull);

} // namespace pcs

#endif
