#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "skiptrack/dataset.hpp"
#include "skiptrack/diagnostics.hpp"
#include "skiptrack/samples.hpp"
#include "skiptrack/simulate.hpp"

namespace skiptrack {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Writes `content` to a sibling temporary file, then renames it over
/// `path`. Throws Io on failure; the destination is never left partial.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

// ---- datasets -------------------------------------------------------------
//
// cycles:   individual_id,cycle_index,cycle_length,x_1,...,x_p
// baseline: individual_id,z_1,...,z_q
//
// cycle_index counts from 1 within an individual. Rows may come in any
// order; individuals keep the order of the baseline file and cycles are
// sorted by cycle_index.

struct IngestOptions {
  bool allow_fractional = false;  // reject non-integer day counts otherwise
};

std::vector<IndividualRecord> parse_dataset(const std::string& cycles_csv, const std::string& baseline_csv,
                                            const IngestOptions& options = {});
std::vector<IndividualRecord> read_dataset(const std::filesystem::path& cycles,
                                           const std::filesystem::path& baseline,
                                           const IngestOptions& options = {});

std::string cycles_csv(const CycleDataset& data);
std::string baseline_csv(const CycleDataset& data);

/// parameter,index,value with parameter in beta, gamma, pi, rho, phi, b, tau,
/// c; indices count from 1.
std::string truth_csv(const SimTruth& truth);

// ---- draws ----------------------------------------------------------------
//
// # skiptrack-draws key=value ...
// chain,iteration,<names...>
//
// The manifest lists seed, chains, draws (per chain, colon separated), dim,
// n_iter, burn_in, thin and generator, followed by any extra entries.

using Manifest = std::vector<std::pair<std::string, std::string>>;

std::string draws_csv(const PosteriorSamples& samples, const Manifest& extra = {});

struct DrawsFile {
  PosteriorSamples samples;
  Manifest manifest;
};

DrawsFile parse_draws(const std::string& text);
DrawsFile read_draws(const std::filesystem::path& path);

// ---- summaries and reports -------------------------------------------------

std::string summary_csv(const SummaryTable& table);
std::string chains_csv(const PosteriorSamples& samples);

/// individual_id,cycle_index,cycle_length,map_c,mean_c,var_c
std::string skips_csv(const CycleDataset& data, const SkipSummary& skips);

/// day,count over integer-day bins [d, d + 1) spanning the observed range.
std::string histogram_csv(const CycleDataset& data);

/// parameter,truth,n,mode,bias,width,coverage,rejection_rate,replicates,failures
std::string report_rows_csv(const std::vector<SimReport>& reports);

/// Bias, width and coverage side by side: parameter,n,full_bias,full_width,full_coverage,
/// fixed_bias,fixed_width,fixed_coverage. Reports are matched by n.
std::string bias_table_csv(const std::vector<SimReport>& full, const std::vector<SimReport>& fixed);

/// Error rates side by side: block,n,full_type1,full_type2,fixed_type1,fixed_type2 for
/// the mean (beta) and precision (gamma) blocks.
std::string error_table_csv(const std::vector<SimReport>& full, const std::vector<SimReport>& fixed);

/// group,n,mean_ratio,ratio_of_means,pairs,excluded
std::string attenuation_csv(const std::vector<std::pair<std::size_t, std::vector<AttenuationRow>>>& rows);

/// replicate,n,mode,failed,skip_accuracy,comparator_accuracy, then estimate,
/// lo and hi per parameter
std::string replicate_records_csv(const SimReport& report);

}  // namespace skiptrack
