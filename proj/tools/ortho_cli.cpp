// ortho: generate test matrices, run the stability experiments, factor user
// matrices and time the schemes.
//
// Exit codes: 0 ok, 2 intra-block orthogonalization failed, 1 usage or I/O error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ortho/b_inner.hpp"
#include "ortho/dense.hpp"
#include "ortho/harness.hpp"
#include "ortho/mtxt.hpp"
#include "ortho/testgen.hpp"

namespace fs = std::filesystem;
using namespace ortho;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIntraFailed = 2;

// F.mtxt -> F.<tag>.mtxt
fs::path tagged(const fs::path& out, const std::string& tag) {
  fs::path p = out;
  const std::string ext = p.has_extension() ? p.extension().string() : std::string(".mtxt");
  p.replace_extension();
  return fs::path(p.string() + "." + tag + ext);
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterError("bad seed '" + item + "'");
    }
  }
  return out;
}

std::string read_config(const std::string& arg) {
  if (arg.empty() || !fs::is_regular_file(arg)) return arg;
  std::ifstream is(arg);
  if (!is) throw IoError("cannot read " + arg);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct GenArgs {
  std::string family;
  Index n = 1000, k = 5, k0 = 100, p = 10;
  double kappa = 1e5, alpha = 0.1;
  std::uint64_t seed = 1;
  bool complex = false;
  fs::path out;
};

void run_gen(const GenArgs& g) {
  using mtxt::write_file;
  const std::string& f = g.family;
  if (f == "sstep" || f == "stewart_extreme") {
    write_file(g.out, gen_family(parse_family(f), g.n, g.p, g.k, g.seed));
  } else if (f == "spd") {
    write_file(g.out, gen_spd(g.n, g.kappa, g.seed));
  } else if (f == "cond") {
    if (g.complex) write_file(g.out, gen_cond_general<cplx>(g.n, g.k, g.kappa, g.seed));
    else write_file(g.out, gen_cond_general<double>(g.n, g.k, g.kappa, g.seed));
  } else if (f == "orthonormal") {
    if (g.complex) write_file(g.out, gen_random_orthonormal<cplx>(g.n, g.k, g.seed));
    else write_file(g.out, gen_random_orthonormal<double>(g.n, g.k, g.seed));
  } else if (f == "badbcg") {
    const VAPair<double> pr = fixture_badbcg();
    write_file(tagged(g.out, "v"), pr.v);
    write_file(tagged(g.out, "a"), pr.a);
  } else if (f == "mlu_adversarial") {
    const AdversarialPair pr = gen_mlu_adversarial(g.k0, g.alpha, g.n, g.seed);
    write_file(tagged(g.out, "v"), pr.v);
    write_file(tagged(g.out, "u"), pr.target_u);
  } else if (f == "prescribed_kappa") {
    const PrescribedPair pr = gen_prescribed_kappa_t(g.n, g.k0, g.kappa, g.seed);
    write_file(tagged(g.out, "v"), pr.v);
    write_file(tagged(g.out, "p"), pr.p);
  } else if (f == "sweep_pair") {
    if (g.complex) {
      const VAPair<cplx> pr = gen_sweep_pair<cplx>(g.n, g.k0, g.k, g.kappa, g.seed);
      write_file(tagged(g.out, "v"), pr.v);
      write_file(tagged(g.out, "a"), pr.a);
    } else {
      const VAPair<double> pr = gen_sweep_pair<double>(g.n, g.k0, g.k, g.kappa, g.seed);
      write_file(tagged(g.out, "v"), pr.v);
      write_file(tagged(g.out, "a"), pr.a);
    }
  } else {
    throw ParameterError("unknown family '" + f + "'");
  }
}

struct FactorArgs {
  fs::path v, a, b;
  std::string choice = "qr";
  std::string intra = "house";
  std::string prefix;
};

template <class T>
int factor_as(const FactorArgs& fa) {
  const Matrix<T> v = mtxt::read_as<T>(fa.v);
  const Matrix<T> a = mtxt::read_as<T>(fa.a);
  TwoStageOptions opts;
  opts.choice = parse_seed_choice(fa.choice);
  opts.intra = parse_intra_method(fa.intra);
  if (opts.choice == SeedChoice::Explicit) throw ParameterError("factor: choice must be mlu, qr or polar");

  InnerProduct<T> ip;
  if (!fa.b.empty()) ip = InnerProduct<T>::weighted(mtxt::read_as<T>(fa.b));

  StabilityReport rep;
  int code = kExitOk;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    TwoStageResult<T> res = ip.is_weighted()
                                ? b_two_stage_qr(v, a, initial_b_basis(ip, v.cols() + a.cols()), ip, opts)
                                : two_stage_qr(v, a, opts);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep = compute_metrics(v, a, res, ip);
    rep.wall_ms = ms;
    mtxt::write_file(fa.prefix + ".q.mtxt", res.q);
    mtxt::write_file(fa.prefix + ".r.mtxt", res.r);
    mtxt::write_file(fa.prefix + ".s.mtxt", res.s);
  } catch (const IntraFailure& e) {
    std::cerr << "ortho: " << e.what() << '\n';
    rep = failed_report();
    rep.n = a.rows();
    rep.k0 = v.cols();
    rep.k = a.cols();
    code = kExitIntraFailed;
  }
  rep.scheme = ip.is_weighted() ? "b_two_stage" : "two_stage";
  rep.choice = std::string(to_string(opts.choice));
  rep.intra = std::string(to_string(opts.intra));
  rep.kappa_input = cond2(hcat(v, a));

  const std::string report = fa.prefix + ".report.csv";
  std::ofstream os(report);
  if (!os) throw IoError("cannot open " + report);
  CsvWriter csv(os);
  csv.write(rep);
  return code;
}

int run_factor(const FactorArgs& fa) {
  const bool cplx_input = std::holds_alternative<Matrix<cplx>>(mtxt::read_file(fa.v)) ||
                          std::holds_alternative<Matrix<cplx>>(mtxt::read_file(fa.a)) ||
                          (!fa.b.empty() && std::holds_alternative<Matrix<cplx>>(mtxt::read_file(fa.b)));
  return cplx_input ? factor_as<cplx>(fa) : factor_as<double>(fa);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage Householder orthogonalization: generators, experiments, factorization and timing"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a seeded test matrix (pairs go to <out>.v.mtxt and friends)");
  gen_cmd->add_option("family", gen.family,
                      "sstep | stewart_extreme | spd | cond | orthonormal | badbcg | mlu_adversarial | "
                      "prescribed_kappa | sweep_pair")
      ->required();
  gen_cmd->add_option("--n", gen.n, "rows")->capture_default_str();
  gen_cmd->add_option("--k", gen.k, "columns (per block for the families)")->capture_default_str();
  gen_cmd->add_option("--k0", gen.k0, "columns of V")->capture_default_str();
  gen_cmd->add_option("--p", gen.p, "number of blocks")->capture_default_str();
  gen_cmd->add_option("--kappa", gen.kappa, "target condition number")->capture_default_str();
  gen_cmd->add_option("--alpha", gen.alpha, "diagonal shift of the adversarial U")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_flag("--complex", gen.complex, "complex output where the generator supports it");
  gen_cmd->add_option("--out", gen.out)->required();

  std::string exp_name, scale_str, seeds_str = "1";
  fs::path run_out;
  auto* run_cmd = app.add_subcommand("run", "run an experiment and write one CSV row per instance");
  run_cmd->add_option("experiment", exp_name, "table1 | table2 | table3 | table4 | fig1 | sweep_unconditional")
      ->required();
  run_cmd->add_option("--scale", scale_str, "overrides such as n=1000,p=10,k=5");
  run_cmd->add_option("--seeds", seeds_str, "comma-separated seeds")->capture_default_str();
  run_cmd->add_option("--out", run_out)->required();

  FactorArgs fa;
  auto* factor_cmd = app.add_subcommand("factor", "factor A against orthonormal V");
  factor_cmd->add_option("--v", fa.v)->required()->check(CLI::ExistingFile);
  factor_cmd->add_option("--a", fa.a)->required()->check(CLI::ExistingFile);
  factor_cmd->add_option("--b", fa.b, "Hermitian positive definite B for the weighted product")
      ->check(CLI::ExistingFile);
  factor_cmd->add_option("--choice", fa.choice, "mlu | qr | polar")->capture_default_str();
  factor_cmd->add_option("--intra", fa.intra, "house | cholshift")->capture_default_str();
  factor_cmd->add_option("--out-prefix", fa.prefix)->required();

  std::string config;
  fs::path time_out;
  auto* time_cmd = app.add_subcommand("time", "median wall time per scheme relative to Householder-QR of [V, A]");
  time_cmd->add_option("--config", config, "file or inline list, e.g. n=10000,k0=100,k=100,repeats=5");
  time_cmd->add_option("--out", time_out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*gen_cmd) {
      run_gen(gen);
    } else if (*run_cmd) {
      run_experiment(parse_experiment(exp_name), parse_scale(scale_str), parse_seeds(seeds_str), run_out);
    } else if (*factor_cmd) {
      return run_factor(fa);
    } else if (*time_cmd) {
      const auto rows = timing_mode(parse_timing_config(read_config(config)));
      if (time_out.empty()) {
        write_timing_csv(std::cout, rows);
      } else {
        std::ofstream os(time_out);
        if (!os) throw IoError("cannot open " + time_out.string());
        write_timing_csv(os, rows);
      }
    }
  } catch (const IntraFailure& e) {
    std::cerr << "ortho: " << e.what() << '\n';
    return kExitIntraFailed;
  } catch (const std::exception& e) {
    std::cerr << "ortho: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}
