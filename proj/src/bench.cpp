#include "sdca/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "sdca/accelerator.hpp"
#include "sdca/baselines.hpp"
#include "sdca/errors.hpp"
#include "sdca/rng.hpp"

namespace sdca {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return x;
}

template <typename T>
std::optional<T> to_unsigned(std::string_view s) {
  T x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return x;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t p = 0;
  while (p < s.size()) {
    while (p < s.size() && (s[p] == ' ' || s[p] == '\t')) ++p;
    std::size_t q = p;
    while (q < s.size() && s[q] != ' ' && s[q] != '\t') ++q;
    if (q > p) out.push_back(s.substr(p, q - p));
    p = q;
  }
  return out;
}

LossFamily make_loss(const ExperimentConfig &c, std::size_t k) {
  switch (c.loss) {
    case LossId::squared: return LossFamily::squared();
    case LossId::logistic: return LossFamily::logistic();
    case LossId::hinge: return LossFamily::hinge();
    case LossId::smooth_hinge: return LossFamily::smooth_hinge(c.gamma);
    case LossId::max_of_hinge: return LossFamily::max_of_hinge(k);
    case LossId::smooth_max_of_hinge: return LossFamily::smooth_max_of_hinge(k, c.gamma);
    case LossId::soft_max_of_hinge: return LossFamily::soft_max_of_hinge(k, c.gamma);
  }
  throw std::invalid_argument("unknown loss");
}

std::string_view loss_names() {
  return "squared, logistic, hinge, smooth_hinge, max_of_hinge, smooth_max_of_hinge, "
         "soft_max_of_hinge";
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Dataset read_libsvm(std::istream &in) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = split_ws(body);
    const auto label = to_double(tokens[0]);
    if (!label || !std::isfinite(*label))
      throw parse_error(line_no, "invalid label '" + std::string(tokens[0]) + "'");
    SparseVector row;
    std::uint32_t prev = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw parse_error(line_no, "expected index:value, got '" + std::string(tok) + "'");
      const auto idx = to_unsigned<std::uint32_t>(tok.substr(0, colon));
      if (!idx) throw parse_error(line_no, "invalid feature index in '" + std::string(tok) + "'");
      if (*idx == 0) throw parse_error(line_no, "feature indices are 1-based, got 0");
      const auto val = to_double(tok.substr(colon + 1));
      if (!val || !std::isfinite(*val))
        throw parse_error(line_no, "invalid feature value in '" + std::string(tok) + "'");
      if (*idx <= prev)
        throw parse_error(line_no, "feature indices must be strictly increasing");
      prev = *idx;
      row.index.push_back(*idx - 1);
      row.value.push_back(*val);
      data.d = std::max<std::size_t>(data.d, *idx);
    }
    data.rows.push_back(std::move(row));
    data.labels.push_back(*label);
  }
  if (data.rows.empty()) throw std::runtime_error("LibSVM input contains no instances");
  return data;
}

Dataset load_libsvm(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return read_libsvm(in);
  } catch (const parse_error &e) {
    throw parse_error(e.line(), path + ": " + e.what());
  } catch (const std::runtime_error &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_libsvm(std::ostream &out, const Dataset &data) {
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << format_double(data.labels[i]);
    const SparseVector &r = data.rows[i];
    for (std::size_t p = 0; p < r.nnz(); ++p)
      out << ' ' << (r.index[p] + 1) << ':' << format_double(r.value[p]);
    out << '\n';
  }
}

void save_libsvm(const std::string &path, const Dataset &data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_libsvm(out, data);
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

Task task_for(LossId loss) {
  switch (loss) {
    case LossId::squared: return Task::regression;
    case LossId::logistic: return Task::logistic;
    case LossId::hinge:
    case LossId::smooth_hinge: return Task::svm;
    default: return Task::multiclass;
  }
}

PreparedData preprocess(const Dataset &data, Task task, bool normalize, NormKind dual_norm) {
  if (data.labels.size() != data.n())
    throw std::invalid_argument("one label per instance required");
  PreparedData out;
  std::vector<SparseVector> rows = data.rows;
  if (normalize) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double norm = std::sqrt(rows[i].squared_norm());
      if (norm == 0.0) {
        out.warnings.push_back("instance " + std::to_string(i) +
                               " is the zero vector and was not normalized");
        continue;
      }
      for (double &v : rows[i].value) v /= norm;
    }
  }
  switch (task) {
    case Task::regression:
      out.params = data.labels;
      out.data = InstanceMatrix::scalar(data.d, std::move(rows), dual_norm);
      break;
    case Task::logistic:
    case Task::svm:
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = data.labels[i];
        if (y != 1.0 && y != -1.0)
          throw std::invalid_argument("instance " + std::to_string(i) +
                                      ": binary labels must be +1 or -1, got " + format_double(y));
        const double sign = task == Task::svm ? y : -y;
        for (double &v : rows[i].value) v *= sign;
      }
      out.data = InstanceMatrix::scalar(data.d, std::move(rows), dual_norm);
      break;
    case Task::multiclass: {
      out.class_values = data.labels;
      std::sort(out.class_values.begin(), out.class_values.end());
      out.class_values.erase(std::unique(out.class_values.begin(), out.class_values.end()),
                             out.class_values.end());
      if (out.class_values.size() < 2)
        throw std::invalid_argument("multiclass data needs at least two distinct labels");
      std::vector<std::size_t> labels(data.n());
      for (std::size_t i = 0; i < data.n(); ++i)
        labels[i] = static_cast<std::size_t>(
            std::lower_bound(out.class_values.begin(), out.class_values.end(), data.labels[i]) -
            out.class_values.begin());
      out.data = InstanceMatrix::multiclass(data.d, out.class_values.size(), std::move(rows),
                                            std::move(labels), dual_norm);
      break;
    }
  }
  return out;
}

Dataset synthetic_dataset(const SyntheticSpec &spec, Task task) {
  if (spec.n == 0 || spec.d == 0) throw std::invalid_argument("synthetic data needs n, d > 0");
  if (!(spec.density > 0.0 && spec.density <= 1.0))
    throw std::invalid_argument("synthetic density must lie in (0, 1]");
  const std::size_t k = task == Task::multiclass ? std::max<std::size_t>(spec.classes, 2) : 1;
  counter_rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> planted(spec.d * k);
  for (double &x : planted) x = normal(rng);

  Dataset data;
  data.d = spec.d;
  for (std::size_t i = 0; i < spec.n; ++i) {
    SparseVector row;
    for (std::size_t j = 0; j < spec.d; ++j) {
      if (rng.uniform01() < spec.density) {
        row.index.push_back(static_cast<std::uint32_t>(j));
        row.value.push_back(normal(rng));
      }
    }
    if (row.index.empty()) {
      row.index.push_back(static_cast<std::uint32_t>(rng.uniform_index(spec.d)));
      row.value.push_back(normal(rng));
    }
    std::vector<double> scores(k, 0.0);
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t p = 0; p < row.nnz(); ++p)
        scores[c] += row.value[p] * planted[c * spec.d + row.index[p]];
    double label = 0.0;
    switch (task) {
      case Task::regression: label = scores[0] + spec.label_noise * normal(rng); break;
      case Task::logistic:
      case Task::svm:
        label = scores[0] >= 0.0 ? 1.0 : -1.0;
        if (rng.uniform01() < spec.label_noise) label = -label;
        break;
      case Task::multiclass: {
        std::size_t best =
            static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
        if (rng.uniform01() < spec.label_noise) best = rng.uniform_index(k);
        label = static_cast<double>(best);
        break;
      }
    }
    data.rows.push_back(std::move(row));
    data.labels.push_back(label);
  }
  return data;
}

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::prox_sdca: return "prox_sdca";
    case Algo::accel: return "accel";
    case Algo::fista: return "fista";
  }
  return "?";
}

std::optional<Algo> parse_algo(std::string_view name) {
  for (Algo a : {Algo::prox_sdca, Algo::accel, Algo::fista})
    if (to_string(a) == name) return a;
  return std::nullopt;
}

void set_config_field(ExperimentConfig &c, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  auto fail = [&](std::string_view expected) -> void {
    throw std::invalid_argument("invalid value '" + std::string(value) + "' for " +
                                std::string(key) + " (expected " + std::string(expected) + ")");
  };
  auto real = [&](double &dst, bool positive) {
    const auto x = to_double(value);
    if (!x || !std::isfinite(*x) || (positive && !(*x > 0.0)) || (!positive && *x < 0.0))
      fail(positive ? "a positive number" : "a non-negative number");
    dst = *x;
  };
  auto count = [&](std::size_t &dst) {
    const auto x = to_unsigned<std::size_t>(value);
    if (!x) fail("a non-negative integer");
    dst = *x;
  };
  auto flag = [&](bool &dst) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") dst = true;
    else if (value == "0" || value == "false" || value == "no" || value == "off") dst = false;
    else fail("true or false");
  };

  if (key == "algo") {
    const auto a = parse_algo(value);
    if (!a) fail("prox_sdca, accel or fista");
    c.algo = *a;
  } else if (key == "loss") {
    const auto l = parse_loss_id(value);
    if (!l) fail(loss_names());
    c.loss = *l;
  } else if (key == "reg") {
    const auto r = parse_reg_id(value);
    if (!r || (*r != RegId::l2 && *r != RegId::elastic)) fail("l2 or elastic");
    c.reg = *r;
  } else if (key == "lambda") {
    real(c.lambda, true);
  } else if (key == "sigma") {
    real(c.sigma, false);
  } else if (key == "gamma") {
    real(c.gamma, true);
  } else if (key == "epsilon") {
    real(c.epsilon, true);
  } else if (key == "max_epochs") {
    count(c.max_epochs);
  } else if (key == "seed") {
    const auto x = to_unsigned<std::uint64_t>(value);
    if (!x) fail("a 64-bit unsigned integer");
    c.seed = *x;
  } else if (key == "normalize") {
    flag(c.normalize);
  } else if (key == "dataset_path") {
    c.dataset_path = std::string(value);
  } else if (key == "trace_path") {
    c.trace_path = std::string(value);
  } else if (key == "step") {
    if (value == "auto") {
      c.step.reset();
    } else {
      const auto s = parse_step_option(value);
      if (!s) fail("auto, closed_form, line_search, analytic_s, r_bound or fixed_s");
      c.step = *s;
    }
  } else if (key == "timing") {
    flag(c.timing);
  } else if (key == "synthetic") {
    flag(c.synthetic);
  } else if (key == "n") {
    count(c.synth.n);
  } else if (key == "d") {
    count(c.synth.d);
  } else if (key == "density") {
    real(c.synth.density, true);
  } else if (key == "label_noise") {
    real(c.synth.label_noise, false);
  } else if (key == "classes") {
    count(c.synth.classes);
  } else if (key == "data_seed") {
    const auto x = to_unsigned<std::uint64_t>(value);
    if (!x) fail("a 64-bit unsigned integer");
    c.synth.seed = *x;
  } else {
    throw std::invalid_argument("unknown configuration key '" + std::string(key) + "'");
  }
}

void apply_manifest(ExperimentConfig &config, std::istream &in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw parse_error(line_no, "expected key=value");
    try {
      set_config_field(config, trim(body.substr(0, eq)), body.substr(eq + 1));
    } catch (const std::invalid_argument &e) {
      throw parse_error(line_no, e.what());
    }
  }
}

void apply_manifest_file(ExperimentConfig &config, const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest '" + path + "'");
  try {
    apply_manifest(config, in);
  } catch (const parse_error &e) {
    throw parse_error(e.line(), path + ": " + e.what());
  }
}

void validate(const ExperimentConfig &c) {
  if (!(c.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (c.max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  if (!(c.lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!c.synthetic && c.dataset_path.empty())
    throw std::invalid_argument("no data: give dataset_path or enable synthetic");
}

Problem build_problem(const ExperimentConfig &c, std::vector<std::string> *warnings) {
  const Task task = task_for(c.loss);
  const Dataset raw = c.synthetic ? synthetic_dataset(c.synth, task) : load_libsvm(c.dataset_path);
  const NormKind norm = c.loss == LossId::soft_max_of_hinge ? NormKind::l1 : NormKind::l2;
  PreparedData prepared = preprocess(raw, task, c.normalize, norm);
  if (warnings)
    warnings->insert(warnings->end(), prepared.warnings.begin(), prepared.warnings.end());
  const std::size_t k = prepared.data.k();
  const Regularizer reg =
      c.reg == RegId::elastic ? Regularizer::elastic(c.sigma / c.lambda) : Regularizer::l2();
  return make_problem(std::move(prepared.data), make_loss(c, k), std::move(prepared.params), reg,
                      c.lambda);
}

ExperimentResult run_experiment(const ExperimentConfig &c) {
  validate(c);
  ExperimentResult result;
  result.algo = c.algo;
  const Problem problem = build_problem(c, &result.warnings);
  const StepOption step =
      c.step ? *c.step : (has_closed_form(problem) ? StepOption::closed_form : StepOption::analytic_s);

  switch (c.algo) {
    case Algo::prox_sdca: {
      SolverOptions opt;
      opt.step = step;
      opt.seed = c.seed;
      opt.max_epochs = c.max_epochs;
      opt.measure_time = c.timing;
      SolveOutcome out = solve(problem, StoppingStrategy::final_iterate(c.epsilon), {}, opt);
      result.trace = std::move(out.trace);
      result.converged = out.converged;
      result.epochs = out.epochs;
      result.gap = out.gap;
      result.primal = out.primal;
      break;
    }
    case Algo::accel: {
      AccelOptions opt;
      opt.seed = c.seed;
      opt.vanilla_max_epochs = c.max_epochs;
      opt.max_total_epochs = static_cast<double>(c.max_epochs);
      opt.measure_time = c.timing;
      AccelOutcome out;
      if (problem.loss.is_smooth()) {
        opt.inner_step = step;
        out = accelerated_solve(problem, c.epsilon, opt);
      } else {
        Problem smoothed = problem;
        smoothed.loss = smooth_lipschitz(problem.loss, c.epsilon);
        opt.inner_step = has_closed_form(smoothed) && !c.step ? StepOption::closed_form : step;
        SmoothedOutcome sm = lipschitz_driver(problem, c.epsilon, opt);
        out = std::move(sm.accel);
      }
      if (!out.accelerated)
        result.warnings.push_back("R^2/(gamma lambda) <= 10 n: acceleration disabled, "
                                  "ran plain prox_sdca");
      result.trace = std::move(out.result.trace);
      result.converged = out.result.converged;
      result.epochs = out.result.epochs;
      result.gap = out.result.gap;
      result.primal = out.result.primal;
      break;
    }
    case Algo::fista: {
      if (!problem.loss.is_smooth())
        throw unsupported_operation("fista needs a smooth loss; use smooth_hinge or "
                                    "smooth_max_of_hinge");
      FistaOptions opt;
      opt.max_epochs = c.max_epochs;
      opt.epsilon = c.epsilon;
      opt.dual_certificate = true;
      opt.measure_time = c.timing;
      SolveOutcome out = fista_solve(problem, opt);
      result.trace = std::move(out.trace);
      result.converged = out.converged;
      result.epochs = out.epochs;
      result.gap = out.gap;
      result.primal = out.primal;
      break;
    }
  }
  if (!c.trace_path.empty()) save_trace_csv(c.trace_path, result.trace);
  return result;
}

void write_trace_csv(std::ostream &out, const ConvergenceTrace &trace) {
  out << "epoch,primal,dual,gap,wall_ms\n";
  auto field = [](double x) { return std::isfinite(x) ? format_double(x) : std::string(); };
  for (const TraceRow &r : trace.rows)
    out << field(r.epoch) << ',' << field(r.primal) << ',' << field(r.dual) << ','
        << field(r.gap) << ',' << field(r.wall_ms) << '\n';
}

void save_trace_csv(const std::string &path, const ConvergenceTrace &trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace '" + path + "'");
  write_trace_csv(out, trace);
  if (!out) throw std::runtime_error("error writing trace '" + path + "'");
}

std::string summary_line(const ExperimentResult &r) {
  return "algo=" + std::string(to_string(r.algo)) + " epochs=" + format_double(r.epochs) +
         " gap=" + format_double(r.gap) + " primal=" + format_double(r.primal);
}

}  // namespace sdca
