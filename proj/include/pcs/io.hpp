#ifndef PCS_IO_HPP
#define PCS_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcs/core.hpp"
#include "pcs/coverage.hpp"
#include "pcs/extract.hpp"
#include "pcs/transform.hpp"

namespace pcs {

/// DIMACS CNF reader. Feature names come from comment lines of the form
/// `c <var-index> <name>`; unnamed variables get synthetic names. Names
/// additionally must not contain ',' (the sample CSV could not represent
/// them).
FeatureModel read_dimacs(const std::filesystem::path& path);
FeatureModel read_dimacs_text(std::string_view text, const std::string& label);
void write_dimacs(std::ostream& out, const FeatureModel& model);

/// Line-record interchange format: `<path>\t<line>\t<formula>` with the
/// shared formula grammar, tautology printed as `1`.
void write_records(std::ostream& out, std::span<const LinePcRecord> records);
std::vector<LinePcRecord> read_records(const std::filesystem::path& path);
std::vector<LinePcRecord> read_records_text(std::string_view text, const std::string& label);

/// Unconstrained model over the atoms of the records, indexed in first
/// occurrence order. For systems without a feature model.
FeatureModel implicit_model(std::span<const LinePcRecord> records);

/// Applies the unknown-feature filter to every record and converts to raw
/// conditions for preprocessing. Unknown names land in `unknown`.
std::vector<RawCondition> to_raw_conditions(std::span<const LinePcRecord> records,
                                            const FeatureModel& model,
                                            std::set<std::string>& unknown);

/// Sample CSV: header of feature names in model order, one `+`/`-` cell
/// per feature per row.
void write_sample_csv(std::ostream& out, const Sample& sample, const FeatureModel& model);
Sample read_sample_csv(const std::filesystem::path& path, const FeatureModel& model);
Sample read_sample_csv_text(std::string_view text, const FeatureModel& model,
                            const std::string& label);

/// Fault list: one `<id>\t<formula>` per line.
struct FaultRecord {
    std::string id;
    Expr formula = Expr::constant(true);
};
std::vector<FaultRecord> read_faults(const std::filesystem::path& path);
std::vector<FaultRecord> read_faults_text(std::string_view text, const std::string& label);

std::string read_file(const std::filesystem::path& path);
std::uint64_t file_checksum(const std::filesystem::path& path);

} // namespace pcs

#endif
