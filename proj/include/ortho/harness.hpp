#pragma once

// Stability reports, CSV output and the experiment drivers behind the CLI.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ortho/baselines.hpp"
#include "ortho/inner_product.hpp"
#include "ortho/two_stage.hpp"

namespace ortho {

enum class RunStatus { Ok, IntraFailed };
std::string_view to_string(RunStatus s);

struct StabilityReport {
  std::string scheme;
  std::string choice = "none";
  std::string intra = "none";
  Index n = 0, k0 = 0, k = 0, p = 0;
  std::uint64_t seed = 0;
  double kappa_input = 0.0;
  double kappa_t = 0.0;  ///< 0 when the scheme has no T
  double loss_orth = 0.0;
  double cross_orth = 0.0;
  double rel_residual = 0.0;
  RunStatus status = RunStatus::Ok;
  double wall_ms = 0.0;
};

/// Metrics of A = V S + Q R: loss of [V, Q], ||V^H B Q||_F and the relative residual.
template <class T>
StabilityReport compute_metrics(const Matrix<T>& v, const Matrix<T>& a, const TwoStageResult<T>& res,
                                const InnerProduct<T>& ip = {});

/// Metrics of A = Q R for a block driver; cross_orth is 0.
template <class T>
StabilityReport compute_metrics(const Matrix<T>& a, const BlockQRResult<T>& res, const InnerProduct<T>& ip = {});

/// Report for a run that broke down: metrics are NaN and status is intra_failed.
StabilityReport failed_report();

/// Comma-separated rows with a fixed header; every row is flushed as written.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os);
  static const std::vector<std::string>& columns();
  void write(const StabilityReport& r);

 private:
  std::ostream& os_;
};

/// %.17g with "nan" and "inf" spelled out.
std::string format_double(double x);

enum class Experiment { Table1, Table2, Table3, Table4, Fig1, SweepUnconditional };
Experiment parse_experiment(std::string_view s);
std::string_view to_string(Experiment e);

/// Zero fields take the experiment's default.
struct Scale {
  Index n = 0;
  Index k0 = 0;
  Index k = 0;
  Index p = 0;
  double kappa_b = 0.0;  ///< table3
  Index instances = 0;   ///< sweep_unconditional
};

/// Parses "n=1000,p=10,k=5". Unknown keys throw ParameterError.
Scale parse_scale(std::string_view s);

/// Runs the experiment, appending each row to csv (if non-null) as it completes.
std::vector<StabilityReport> run_experiment(Experiment e, const Scale& scale, const std::vector<std::uint64_t>& seeds,
                                            CsvWriter* csv = nullptr);

/// run_experiment writing a fresh CSV at out. Throws IoError if out cannot be opened.
std::vector<StabilityReport> run_experiment(Experiment e, const Scale& scale, const std::vector<std::uint64_t>& seeds,
                                            const std::filesystem::path& out);

struct TimingConfig {
  Index n = 2000;
  Index k0 = 50;
  Index k = 50;
  int repeats = 5;
  std::uint64_t seed = 1;
};

/// Parses "n=10000,k0=100,k=100,repeats=5,seed=1".
TimingConfig parse_timing_config(std::string_view s);

struct TimingRow {
  std::string scheme;
  std::string choice = "none";
  Index n = 0, k0 = 0, k = 0;
  double median_ms = 0.0;
  double relative_time = 0.0;  ///< median_ms over the full Householder-QR of [V, A]
};

/// Median-of-repeats wall time for the full Householder-QR of [V, A], the
/// two-stage QR with each seed choice, BCGS2 and two-stage Cholesky-QR.
std::vector<TimingRow> timing_mode(const TimingConfig& cfg);
void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows);

}  // namespace ortho
