#include "hypex/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "hypex/boltzmann.hpp"
#include "hypex/detection.hpp"
#include "hypex/hypothesis.hpp"
#include "hypex/types.hpp"

namespace hypex::cli {

namespace {

std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view token = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    out.push_back(token);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token) {
  T value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError("cannot parse '" + std::string(token) + "' as a number");
  }
  return value;
}

// CSV writer with a fixed header; every row must match its width.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header)
      : out_(out), width_(header.size()) {
    write(header);
  }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw Error("internal: CSV row width mismatch");
    write(fields);
  }

 private:
  void write(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::size_t width_;
};

std::string fmt(double x) { return format_real(x); }
std::string fmt(std::uint64_t x) { return std::to_string(x); }

void append_counts(std::vector<std::string>& fields, const EmpiricalType& t) {
  for (Index a = 0; a < t.alphabet_size(); ++a) fields.push_back(fmt(t[a]));
}

void append_count_header(std::vector<std::string>& header, Index k) {
  for (Index a = 0; a < k; ++a) header.push_back("c" + std::to_string(a));
}

struct Options {
  std::uint64_t seed = 0;
  std::string output;

  std::string p, q, p1, p2, priors, levels, dims, amplitudes, n_list, mode = "at-least";
  std::uint64_t n = 0;
  std::uint64_t alphabet = 0;
  std::uint64_t trials = 0;
  std::uint64_t cap = kDefaultEnumerationCap;
  Index symbol = 0;
  double threshold = 0.0;
  double delta = 0.05;
  double epsilon = 0.05;
  double tol = kDefaultChernoffTolerance;
  double mean_tol = 1e-12;
  std::optional<double> beta;
  std::optional<double> mean;
  unsigned workers = 0;
};

void run_kl(const Options& o, std::ostream& out) {
  const auto p = parse_distribution(o.p);
  const auto q = parse_distribution(o.q);
  require_same_alphabet(p, q);
  CsvWriter csv(out, {"entropy_p_bits", "entropy_q_bits", "kl_pq_bits", "kl_qp_bits"});
  csv.row({fmt(entropy(p)), fmt(entropy(q)), fmt(kl_divergence(p, q)), fmt(kl_divergence(q, p))});
}

void run_types(const Options& o, std::ostream& out) {
  if (o.alphabet < 1) throw ValidationError("--alphabet must be at least 1");
  const auto k = static_cast<Index>(o.alphabet);
  const Distribution q = o.q.empty() ? Distribution::uniform(k) : parse_distribution(o.q);
  if (q.size() != k) throw ValidationError("--q must have --alphabet entries");
  std::vector<std::string> header;
  append_count_header(header, k);
  for (const char* name : {"size", "size_is_exact", "log2_size", "log2_size_lower",
                           "log2_size_upper", "log2_prob"}) {
    header.emplace_back(name);
  }
  CsvWriter csv(out, header);
  for_each_type(
      o.n, k,
      [&](const EmpiricalType& t) {
        const auto size = type_class_size(t);
        const auto bounds = type_class_size_bounds(t);
        std::vector<std::string> fields;
        append_counts(fields, t);
        fields.push_back(size.exact ? fmt(*size.exact) : fmt(std::exp2(size.log2_size)));
        fields.push_back(size.exact ? "1" : "0");
        fields.push_back(fmt(size.log2_size));
        fields.push_back(fmt(bounds.lower));
        fields.push_back(fmt(bounds.upper));
        fields.push_back(fmt(type_class_log_prob(t, q)));
        csv.row(fields);
      },
      o.cap);
}

ConstraintSet parse_constraint(const Options& o) {
  if (o.mode == "at-least") return ConstraintSet::at_least(o.symbol, o.threshold);
  if (o.mode == "at-most") return ConstraintSet::at_most(o.symbol, o.threshold);
  throw ValidationError("--mode must be at-least or at-most");
}

void run_sanov(const Options& o, std::ostream& out) {
  const auto p = parse_distribution(o.p);
  const auto pi = parse_constraint(o);
  pi.validate(p.size());
  const auto ns = parse_counts(o.n_list);
  std::vector<std::string> header{"n", "d_star_bits"};
  append_count_header(header, p.size());
  for (const char* name : {"exact_prob", "log2_prob", "rate_bits", "log2_lower", "log2_upper"}) {
    header.emplace_back(name);
  }
  CsvWriter csv(out, header);
  for (std::uint64_t n : ns) {
    const auto best = sanov_exponent(pi, p, n, o.cap);
    const auto prob = sanov_exact_prob(pi, p, n, o.cap);
    const double log2_c = log2_type_prefactor(n, p.size());
    const double nd = static_cast<double>(n) * best.d_star;
    std::vector<std::string> fields{fmt(n), fmt(best.d_star)};
    append_counts(fields, best.minimizer);
    fields.push_back(fmt(prob.probability));
    fields.push_back(fmt(prob.log2_probability));
    fields.push_back(fmt(-prob.log2_probability / static_cast<double>(n)));
    fields.push_back(fmt(-nd - log2_c));
    fields.push_back(fmt(-nd + log2_c));
    csv.row(fields);
  }
}

void run_stein(const Options& o, std::ostream& out) {
  const BinaryHypothesis h(parse_distribution(o.p1), parse_distribution(o.p2));
  CsvWriter csv(out, {"n", "delta", "alpha_n", "beta_n", "stein_exponent_bits", "epsilon",
                      "np_beta", "np_exponent_bits", "kl_bits"});
  for (std::uint64_t n : parse_counts(o.n_list)) {
    const auto report = stein_errors(h, n, o.delta, o.cap);
    const double log2_np = neyman_pearson_log2_min_beta(h, n, o.epsilon, o.cap);
    csv.row({fmt(n), fmt(o.delta), fmt(report.alpha_n), fmt(report.beta_n), fmt(report.exponent),
             fmt(o.epsilon), fmt(std::exp2(log2_np)), fmt(-log2_np / static_cast<double>(n)),
             fmt(h.divergence())});
  }
}

void run_chernoff(const Options& o, std::ostream& out) {
  double prior1 = 0.5;
  double prior2 = 0.5;
  if (!o.priors.empty()) {
    const auto pr = parse_reals(o.priors);
    if (pr.size() != 2) throw ValidationError("--priors takes two values");
    prior1 = pr[0];
    prior2 = pr[1];
  }
  const BinaryHypothesis h(parse_distribution(o.p1), parse_distribution(o.p2), prior1, prior2);
  const auto report = chernoff_lambda_star(h, o.tol);
  CsvWriter csv(out, {"lambda_star", "c_info_bits", "d1_bits", "d2_bits", "kl_p1_p2_bits",
                      "kl_p2_p1_bits"});
  csv.row({fmt(report.lambda_star), fmt(report.c_info), fmt(report.d1), fmt(report.d2),
           fmt(h.divergence()), fmt(kl_divergence(h.p2(), h.p1()))});
}

void run_boltzmann(const Options& o, std::ostream& out) {
  const auto raw = parse_reals(o.levels);
  VectorX<double> levels(static_cast<Index>(raw.size()));
  for (Index j = 0; j < levels.size(); ++j) levels[j] = raw[static_cast<std::size_t>(j)];
  if (o.beta.has_value() == o.mean.has_value()) {
    throw ValidationError("give exactly one of --beta or --mean");
  }
  const double beta = o.beta ? *o.beta : solve_beta(levels, *o.mean, o.mean_tol);
  const EnergySystem sys(levels, beta);
  const auto probs = boltzmann_distribution(sys);
  const double log_z = log_partition_function(sys);
  CsvWriter csv(out, {"level", "prob", "beta", "log_partition_nats"});
  for (Index j = 0; j < levels.size(); ++j) {
    csv.row({fmt(levels[j]), fmt(probs[j]), fmt(beta), fmt(log_z)});
  }
}

void run_detect(const Options& o, std::ostream& out) {
  const auto rows = sweep(parse_counts(o.dims), parse_reals(o.amplitudes), o.trials, o.seed,
                          o.workers);
  CsvWriter csv(out, {"dim", "amplitude", "analytic_pe", "chernoff_bound", "empirical_pe",
                      "trials"});
  for (const auto& r : rows) {
    csv.row({fmt(r.dim), fmt(r.amplitude), fmt(r.analytic_pe), fmt(r.chernoff_bound),
             fmt(r.empirical_pe), fmt(r.trials)});
  }
}

}  // namespace

std::vector<double> parse_reals(std::string_view text) {
  std::vector<double> out;
  for (auto token : split(text)) {
    const double v = parse_number<double>(token);
    if (!std::isfinite(v)) throw ValidationError("values must be finite");
    out.push_back(v);
  }
  return out;
}

std::vector<std::uint64_t> parse_counts(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (auto token : split(text)) out.push_back(parse_number<std::uint64_t>(token));
  return out;
}

Distribution parse_distribution(std::string_view text) {
  const auto values = parse_reals(text);
  VectorX<double> w(static_cast<Index>(values.size()));
  for (Index a = 0; a < w.size(); ++a) w[a] = values[static_cast<std::size_t>(a)];
  return make_distribution(w);
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Error exponents, method of types, Boltzmann solver and detection simulator"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Seed for stochastic subcommands (ignored elsewhere)");
  app.add_option("--output", o.output, "Write CSV to this file instead of stdout");

  auto* kl = app.add_subcommand("kl", "Entropies and KL divergences of two distributions, in bits");
  kl->add_option("--p", o.p, "First distribution, comma-separated weights")->required();
  kl->add_option("--q", o.q, "Second distribution, comma-separated weights")->required();

  auto* types = app.add_subcommand(
      "types", "Enumerate n-types with log2 class sizes, size bounds and log2 probabilities");
  types->add_option("--n", o.n, "Sequence length")->required();
  types->add_option("--alphabet", o.alphabet, "Alphabet size")->required();
  types->add_option("--q", o.q, "Source distribution for log2_prob (default uniform)");
  types->add_option("--cap", o.cap, "Maximum number of types to enumerate");

  auto* sanov = app.add_subcommand(
      "sanov", "Exact P(type in Pi) and the Sanov exponent for a one-symbol mass constraint, bits");
  sanov->add_option("--p", o.p, "Source distribution, comma-separated weights")->required();
  sanov->add_option("--symbol", o.symbol, "Constrained symbol index")->required();
  sanov->add_option("--threshold", o.threshold, "Mass threshold in [0, 1]")->required();
  sanov->add_option("--mode", o.mode, "at-least (Q(symbol) >= t) or at-most (Q(symbol) <= t)");
  sanov->add_option("--n", o.n_list, "Comma-separated sample sizes")->required();
  sanov->add_option("--cap", o.cap, "Maximum number of types to enumerate");

  auto* stein = app.add_subcommand(
      "stein", "Exact Stein-region errors and Neyman-Pearson optimum; exponents in bits");
  stein->add_option("--p1", o.p1, "Hypothesis 1 distribution")->required();
  stein->add_option("--p2", o.p2, "Hypothesis 2 distribution")->required();
  stein->add_option("--n", o.n_list, "Comma-separated sample sizes")->required();
  stein->add_option("--delta", o.delta, "Half-width of the typical LLR band, bits per symbol");
  stein->add_option("--epsilon", o.epsilon, "Type I error budget in (0, 1/2)");
  stein->add_option("--cap", o.cap, "Maximum number of types to enumerate");

  auto* chernoff = app.add_subcommand(
      "chernoff", "Chernoff information and equalizing tilt lambda*; divergences in bits");
  chernoff->add_option("--p1", o.p1, "Hypothesis 1 distribution")->required();
  chernoff->add_option("--p2", o.p2, "Hypothesis 2 distribution")->required();
  chernoff->add_option("--tol", o.tol, "Bisection tolerance on D(P||p1) - D(P||p2), bits");
  chernoff->add_option("--priors", o.priors, "Prior pair pi1,pi2 (does not affect the exponent)");

  auto* boltzmann = app.add_subcommand(
      "boltzmann", "Boltzmann distribution over energy levels; natural-log units");
  boltzmann->add_option("--levels", o.levels, "Comma-separated energies")->required();
  boltzmann->add_option("--beta", o.beta, "Inverse temperature 1/(k_B T), per energy unit");
  boltzmann->add_option("--mean", o.mean, "Target mean energy; beta is solved for");
  boltzmann->add_option("--tol", o.mean_tol, "Mean-energy tolerance when solving for beta");

  auto* detect = app.add_subcommand(
      "detect", "Binary detection sweep: Q-function, Chernoff bound and Monte Carlo error");
  detect->add_option("--dims", o.dims, "Comma-separated noise dimensions N")->required();
  detect->add_option("--amplitudes", o.amplitudes, "Comma-separated signal levels m")->required();
  detect->add_option("--trials", o.trials, "Monte Carlo trials per cell")->required();
  detect->add_option("--workers", o.workers, "Worker threads (0 = hardware); output unaffected");

  std::vector<std::string> argv_store{"hypex"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  const std::vector<std::pair<CLI::App*, std::function<void(const Options&, std::ostream&)>>>
      handlers{{kl, run_kl},           {types, run_types},         {sanov, run_sanov},
               {stein, run_stein},     {chernoff, run_chernoff}, {boltzmann, run_boltzmann},
               {detect, run_detect}};

  try {
    std::ostringstream buffer;
    for (const auto& [sub, handler] : handlers) {
      if (sub->parsed()) handler(o, buffer);
    }
    if (o.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(o.output, std::ios::binary);
      if (!file) throw ValidationError("cannot open output file " + o.output);
      file << buffer.str();
    }
    return kSuccess;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace hypex::cli
