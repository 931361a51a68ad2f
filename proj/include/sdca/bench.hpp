#ifndef SDCA_BENCH_HPP
#define SDCA_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdca/core_model.hpp"
#include "sdca/instance_matrix.hpp"
#include "sdca/losses.hpp"
#include "sdca/prox_sdca.hpp"
#include "sdca/regularizers.hpp"

namespace sdca {

/// Raw labeled sparse data as read from a LibSVM file.
struct Dataset {
  std::size_t d = 0;
  std::vector<SparseVector> rows;
  std::vector<double> labels;

  std::size_t n() const noexcept { return rows.size(); }
};

/// Parses "label idx:val idx:val ..." lines with 1-based indices. Blank lines
/// and lines starting with '#' are skipped; d is the largest index seen.
/// Throws parse_error with the line number on malformed input and
/// std::runtime_error when no instance is present.
Dataset read_libsvm(std::istream &in);
Dataset load_libsvm(const std::string &path);

/// Writes with 17 significant digits, so read_libsvm round-trips exactly.
void write_libsvm(std::ostream &out, const Dataset &data);
void save_libsvm(const std::string &path, const Dataset &data);

enum class Task {
  regression,  // squared loss, labels become the loss parameters
  logistic,    // x_i <- -y_i x_i
  svm,         // x_i <- y_i x_i
  multiclass,  // distinct labels map to classes 0..k-1 in increasing order
};

Task task_for(LossId loss);

struct PreparedData {
  InstanceMatrix data;
  std::vector<double> params;  // squared-loss targets; empty otherwise
  std::vector<double> class_values;  // multiclass: label value of each class
  std::vector<std::string> warnings;
};

/// Optionally scales every row to unit Euclidean norm (zero rows are left
/// alone with a warning), folds binary labels into the rows and builds the
/// instance matrix.
PreparedData preprocess(const Dataset &data, Task task, bool normalize,
                        NormKind dual_norm = NormKind::l2);

struct SyntheticSpec {
  std::size_t n = 2000;
  std::size_t d = 100;
  double density = 0.1;
  double label_noise = 0.1;  // flip (or relabel) probability; noise scale for regression
  std::size_t classes = 2;
  std::uint64_t seed = 1;
};

/// Gaussian sparse instances labeled by a planted linear model: sign for
/// two classes, argmax for more, x^T w* + noise for regression.
Dataset synthetic_dataset(const SyntheticSpec &spec, Task task);

enum class Algo { prox_sdca, accel, fista };

std::string_view to_string(Algo algo);
std::optional<Algo> parse_algo(std::string_view name);

struct ExperimentConfig {
  Algo algo = Algo::prox_sdca;
  LossId loss = LossId::smooth_hinge;
  RegId reg = RegId::elastic;
  double lambda = 1e-4;
  double sigma = 1e-5;   // l1 weight; the regularizer uses sigma' = sigma / lambda
  double gamma = 1.0;    // smoothing parameter of the smoothed families
  double epsilon = 1e-3;
  std::size_t max_epochs = 100;
  std::uint64_t seed = 1;
  bool normalize = true;
  std::string dataset_path;
  std::string trace_path;
  std::optional<StepOption> step;  // default: closed form when available, else analytic_s
  bool timing = true;
  bool synthetic = false;
  SyntheticSpec synth;
};

/// Sets one field from its textual key=value form. Throws
/// std::invalid_argument for unknown keys or malformed values.
void set_config_field(ExperimentConfig &config, std::string_view key, std::string_view value);

/// Applies key=value lines ('#' starts a comment). Errors carry the line.
void apply_manifest(ExperimentConfig &config, std::istream &in);
void apply_manifest_file(ExperimentConfig &config, const std::string &path);

/// Checks epsilon > 0, max_epochs >= 1 and that a data source is given.
void validate(const ExperimentConfig &config);

struct ExperimentResult {
  Algo algo = Algo::prox_sdca;
  ConvergenceTrace trace;
  bool converged = false;
  double epochs = 0.0;
  double gap = 0.0;
  double primal = 0.0;
  std::vector<std::string> warnings;
};

/// Builds the problem described by the config.
Problem build_problem(const ExperimentConfig &config, std::vector<std::string> *warnings = nullptr);

/// Builds the problem, runs the selected algorithm and writes the trace to
/// config.trace_path when it is set.
ExperimentResult run_experiment(const ExperimentConfig &config);

/// CSV with header epoch,primal,dual,gap,wall_ms; non-finite values are
/// written as empty fields.
void write_trace_csv(std::ostream &out, const ConvergenceTrace &trace);
void save_trace_csv(const std::string &path, const ConvergenceTrace &trace);

/// "algo=<id> epochs=<e> gap=<g> primal=<p>"
std::string summary_line(const ExperimentResult &result);

/// %.17g formatting (round-trip exact for doubles).
std::string format_double(double x);

}  // namespace sdca

#endif
