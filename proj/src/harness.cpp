#include "ortho/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ortho/b_inner.hpp"
#include "ortho/metrics.hpp"
#include "ortho/testgen.hpp"

namespace ortho {

std::string_view to_string(RunStatus s) { return s == RunStatus::Ok ? "ok" : "intra_failed"; }

template <class T>
StabilityReport compute_metrics(const Matrix<T>& v, const Matrix<T>& a, const TwoStageResult<T>& res,
                                const InnerProduct<T>& ip) {
  if (v.rows() != a.rows() || res.q.rows() != a.rows() || res.q.cols() != a.cols())
    throw DimensionError("compute_metrics: inconsistent shapes");
  StabilityReport r;
  r.n = a.rows();
  r.k0 = v.cols();
  r.k = a.cols();
  r.loss_orth = loss_of_orthogonality(v, res.q, ip);
  r.cross_orth = v.cols() ? cross_orthogonality(v, res.q, ip) : 0.0;
  r.rel_residual = relative_residual(a, v, res.s, res.q, res.r);
  if (res.diagnostics) r.kappa_t = res.diagnostics->kappa_t;
  return r;
}

template <class T>
StabilityReport compute_metrics(const Matrix<T>& a, const BlockQRResult<T>& res, const InnerProduct<T>& ip) {
  if (res.q.rows() != a.rows() || res.q.cols() != a.cols()) throw DimensionError("compute_metrics: inconsistent shapes");
  StabilityReport r;
  r.n = a.rows();
  r.k = a.cols();
  r.p = static_cast<Index>(res.block_sizes.size());
  r.loss_orth = loss_of_orthogonality(Matrix<T>(a.rows(), 0), res.q, ip);
  r.rel_residual = relative_residual(a, Matrix<T>(a.rows(), 0), Matrix<T>(0, a.cols()), res.q, res.r);
  r.kappa_t = res.max_kappa_t;
  return r;
}

StabilityReport failed_report() {
  StabilityReport r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.kappa_t = r.loss_orth = r.cross_orth = r.rel_residual = nan;
  r.status = RunStatus::IntraFailed;
  return r;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os) : os_(os) {
  const auto& c = columns();
  for (std::size_t i = 0; i < c.size(); ++i) os_ << (i ? "," : "") << c[i];
  os_ << '\n' << std::flush;
}

const std::vector<std::string>& CsvWriter::columns() {
  static const std::vector<std::string> cols{"scheme",     "choice",    "intra",   "n",         "k0",
                                             "k",          "p",         "seed",    "kappa_input", "kappa_t",
                                             "loss_orth",  "cross_orth", "rel_residual", "status", "wall_ms"};
  return cols;
}

void CsvWriter::write(const StabilityReport& r) {
  os_ << r.scheme << ',' << r.choice << ',' << r.intra << ',' << r.n << ',' << r.k0 << ',' << r.k << ',' << r.p << ','
      << r.seed << ',' << format_double(r.kappa_input) << ',' << format_double(r.kappa_t) << ','
      << format_double(r.loss_orth) << ',' << format_double(r.cross_orth) << ',' << format_double(r.rel_residual)
      << ',' << to_string(r.status) << ',' << format_double(r.wall_ms) << '\n'
      << std::flush;
  if (!os_) throw IoError("CsvWriter: write failed");
}

Experiment parse_experiment(std::string_view s) {
  if (s == "table1") return Experiment::Table1;
  if (s == "table2") return Experiment::Table2;
  if (s == "table3") return Experiment::Table3;
  if (s == "table4") return Experiment::Table4;
  if (s == "fig1") return Experiment::Fig1;
  if (s == "sweep_unconditional" || s == "sweep") return Experiment::SweepUnconditional;
  throw ParameterError("unknown experiment '" + std::string(s) + "'");
}

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::Table1:
      return "table1";
    case Experiment::Table2:
      return "table2";
    case Experiment::Table3:
      return "table3";
    case Experiment::Table4:
      return "table4";
    case Experiment::Fig1:
      return "fig1";
    case Experiment::SweepUnconditional:
      return "sweep_unconditional";
  }
  return "?";
}

namespace {

// "a=1,b=2" -> callback(key, value)
template <class F>
void parse_pairs(std::string_view s, F&& f) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find_first_of(",\n", pos);
    if (end == std::string_view::npos) end = s.size();
    std::string_view item = s.substr(pos, end - pos);
    pos = end + 1;
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) item.remove_prefix(1);
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t' || item.back() == '\r')) item.remove_suffix(1);
    if (item.empty() || item.front() == '#') continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParameterError("expected key=value, got '" + std::string(item) + "'");
    f(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
}

double to_num(const std::string& key, const std::string& val) {
  try {
    std::size_t used = 0;
    const double x = std::stod(val, &used);
    if (used != val.size()) throw std::invalid_argument(val);
    return x;
  } catch (const std::exception&) {
    throw ParameterError("bad value for " + key + ": '" + val + "'");
  }
}

Index to_index(const std::string& key, const std::string& val) {
  const double x = to_num(key, val);
  if (x < 0 || x != std::floor(x)) throw ParameterError(key + " must be a nonnegative integer");
  return static_cast<Index>(x);
}

Index or_default(Index v, Index d) { return v > 0 ? v : d; }

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

using Clock = std::chrono::steady_clock;

const SeedChoice kChoices[] = {SeedChoice::DiagonalMLU, SeedChoice::QRSeed, SeedChoice::PolarSeed};

struct Emit {
  std::vector<StabilityReport>& rows;
  CsvWriter* csv;
  void operator()(StabilityReport r) {
    if (csv) csv->write(r);
    rows.push_back(std::move(r));
  }
};

void run_table1(Emit& emit) {
  const VAPair<double> f = fixture_badbcg();
  const char* seqs[] = {"ab", "aab", "abab", "aaab", "ababab"};
  for (const char* s : seqs) {
    BaselineSpec spec;
    spec.reorth_sequence.clear();
    for (const char* c = s; *c; ++c) spec.reorth_sequence.push_back(*c == 'a' ? Step::Inter : Step::Intra);
    const auto t0 = Clock::now();
    const TwoStageResult<double> res = bcgs_two_stage(f.v, f.a, spec);
    const double ms = elapsed_ms(t0);
    StabilityReport r = compute_metrics(f.v, f.a, res);
    r.scheme = std::string("bcgs_") + s;
    r.intra = std::string(to_string(IntraMethod::Householder));
    r.kappa_input = cond2(hcat(f.v, f.a));
    r.wall_ms = ms;
    emit(std::move(r));
  }
}

// table2 (Euclidean) and table3 (weighted) share everything but the inner product
void run_block_tables(Emit& emit, const Scale& sc, const std::vector<std::uint64_t>& seeds, bool weighted) {
  const Index n = or_default(sc.n, 1000), p = or_default(sc.p, 10), k = or_default(sc.k, 5);
  const double kappa_b = sc.kappa_b > 0 ? sc.kappa_b : 1e5;
  for (std::uint64_t seed : seeds) {
    const InnerProduct<double> ip =
        weighted ? InnerProduct<double>::weighted(gen_spd(n, kappa_b, seed ^ 0x5bd1e995ULL)) : InnerProduct<double>();
    for (Family fam : {Family::SStep, Family::StewartExtreme}) {
      const Matrix<double> a = gen_family(fam, n, p, k, seed);
      const std::vector<Matrix<double>> blocks = split_blocks(a, p);
      const double kin = cond2(a);
      const std::string fname(to_string(fam));
      auto finish = [&](StabilityReport r, const std::string& scheme, const std::string& choice,
                        const std::string& intra, double ms) {
        r.scheme = scheme + ":" + fname;
        r.choice = choice;
        r.intra = intra;
        r.n = n;
        r.k = p * k;
        r.p = p;
        r.seed = seed;
        r.kappa_input = kin;
        r.wall_ms = ms;
        emit(std::move(r));
      };
      for (SeedChoice c : kChoices) {
        TwoStageOptions opts;
        opts.choice = c;
        const auto t0 = Clock::now();
        BlockQRResult<double> res =
            weighted ? b_block_householder_qr(blocks, ip, opts) : block_householder_qr(blocks, opts);
        const double ms = elapsed_ms(t0);
        finish(compute_metrics(a, res, ip), "block_householder", std::string(to_string(c)), "house", ms);
      }
      for (IntraMethod m : {IntraMethod::Householder, IntraMethod::ShiftedCholesky}) {
        const auto t0 = Clock::now();
        StabilityReport r;
        try {
          BlockQRResult<double> res = bcgs2_block(blocks, m, ip);
          const double ms = elapsed_ms(t0);
          r = compute_metrics(a, res, ip);
          r.kappa_t = 0.0;
          r.wall_ms = ms;
        } catch (const IntraFailure&) {
          r = failed_report();
          r.wall_ms = elapsed_ms(t0);
        }
        finish(r, "bcgs2", "none", std::string(to_string(m)), r.wall_ms);
      }
    }
  }
}

void run_table4(Emit& emit, const Scale& sc, const std::vector<std::uint64_t>& seeds) {
  const Index n = or_default(sc.n, 1000), k0 = or_default(sc.k0, 100), k = or_default(sc.k, 100);
  for (std::uint64_t seed : seeds) {
    const AdversarialPair pair = gen_mlu_adversarial(k0, 0.1, n, seed);
    Rng rng(seed + 0x9e3779b97f4a7c15ULL);
    const Matrix<double> a = random_gaussian<double>(rng, n, k);
    const double kin = cond2(pair.target_u);
    for (SeedChoice c : kChoices) {
      TwoStageOptions opts;
      opts.choice = c;
      const auto t0 = Clock::now();
      const TwoStageResult<double> res = two_stage_qr(pair.v, a, opts);
      const double ms = elapsed_ms(t0);
      StabilityReport r = compute_metrics(pair.v, a, res);
      r.scheme = "two_stage";
      r.choice = std::string(to_string(c));
      r.intra = "house";
      r.seed = seed;
      r.kappa_input = kin;
      r.wall_ms = ms;
      emit(std::move(r));
    }
  }
}

void run_fig1(Emit& emit, const Scale& sc, const std::vector<std::uint64_t>& seeds) {
  const Index n = or_default(sc.n, 1000), k0 = or_default(sc.k0, 100), k = or_default(sc.k, 100);
  for (double kappa : {1e2, 1e4, 1e6, 1e8, 1e10, 1e12}) {
    for (std::uint64_t seed : seeds) {
      const PrescribedPair pair = gen_prescribed_kappa_t(n, k0, kappa, seed);
      Rng rng(seed + 0x632be59bd9b4e019ULL);
      const Matrix<double> a = random_gaussian<double>(rng, n, k);
      TwoStageOptions opts;
      opts.choice = SeedChoice::Explicit;
      const auto t0 = Clock::now();
      const TwoStageResult<double> res = two_stage_qr(pair.v, a, opts, &pair.p);
      const double ms = elapsed_ms(t0);
      StabilityReport r = compute_metrics(pair.v, a, res);
      r.scheme = "two_stage";
      r.choice = "explicit";
      r.intra = "house";
      r.seed = seed;
      r.kappa_input = kappa;
      r.wall_ms = ms;
      emit(std::move(r));
    }
  }
}

void run_sweep(Emit& emit, const Scale& sc, const std::vector<std::uint64_t>& seeds) {
  const Index n = or_default(sc.n, 500), k0 = or_default(sc.k0, 20), k = or_default(sc.k, 20);
  const Index count = or_default(sc.instances, 200);
  const std::vector<double> kappas = logspace(0.0, 15.0, count);
  for (std::uint64_t base : seeds) {
    for (Index i = 0; i < count; ++i) {
      const std::uint64_t seed = base * 1000003ULL + static_cast<std::uint64_t>(i);
      const VAPair<double> pr = gen_sweep_pair<double>(n, k0, k, kappas[static_cast<std::size_t>(i)], seed);
      const double kin = cond2(hcat(pr.v, pr.a));
      for (SeedChoice c : {SeedChoice::QRSeed, SeedChoice::PolarSeed}) {
        TwoStageOptions opts;
        opts.choice = c;
        const auto t0 = Clock::now();
        StabilityReport r;
        try {
          const TwoStageResult<double> res = two_stage_qr(pr.v, pr.a, opts);
          const double ms = elapsed_ms(t0);
          r = compute_metrics(pr.v, pr.a, res);
          r.wall_ms = ms;
        } catch (const IntraFailure&) {
          r = failed_report();
          r.n = n;
          r.k0 = k0;
          r.k = k;
        }
        r.scheme = "two_stage";
        r.choice = std::string(to_string(c));
        r.intra = "house";
        r.seed = seed;
        r.kappa_input = kin;
        emit(std::move(r));
      }
    }
  }
}

}  // namespace

Scale parse_scale(std::string_view s) {
  Scale sc;
  parse_pairs(s, [&](const std::string& key, const std::string& val) {
    if (key == "n") sc.n = to_index(key, val);
    else if (key == "k0") sc.k0 = to_index(key, val);
    else if (key == "k") sc.k = to_index(key, val);
    else if (key == "p") sc.p = to_index(key, val);
    else if (key == "kappa_b") sc.kappa_b = to_num(key, val);
    else if (key == "instances") sc.instances = to_index(key, val);
    else throw ParameterError("unknown scale key '" + key + "'");
  });
  return sc;
}

std::vector<StabilityReport> run_experiment(Experiment e, const Scale& scale, const std::vector<std::uint64_t>& seeds,
                                            CsvWriter* csv) {
  std::vector<StabilityReport> rows;
  Emit emit{rows, csv};
  const std::vector<std::uint64_t> s = seeds.empty() ? std::vector<std::uint64_t>{1} : seeds;
  switch (e) {
    case Experiment::Table1:
      run_table1(emit);
      break;
    case Experiment::Table2:
      run_block_tables(emit, scale, s, false);
      break;
    case Experiment::Table3:
      run_block_tables(emit, scale, s, true);
      break;
    case Experiment::Table4:
      run_table4(emit, scale, s);
      break;
    case Experiment::Fig1:
      run_fig1(emit, scale, s);
      break;
    case Experiment::SweepUnconditional:
      run_sweep(emit, scale, s);
      break;
  }
  return rows;
}

std::vector<StabilityReport> run_experiment(Experiment e, const Scale& scale, const std::vector<std::uint64_t>& seeds,
                                            const std::filesystem::path& out) {
  std::ofstream os(out);
  if (!os) throw IoError("cannot open " + out.string() + " for writing");
  CsvWriter csv(os);
  return run_experiment(e, scale, seeds, &csv);
}

TimingConfig parse_timing_config(std::string_view s) {
  TimingConfig c;
  parse_pairs(s, [&](const std::string& key, const std::string& val) {
    if (key == "n") c.n = to_index(key, val);
    else if (key == "k0") c.k0 = to_index(key, val);
    else if (key == "k") c.k = to_index(key, val);
    else if (key == "repeats") c.repeats = static_cast<int>(to_index(key, val));
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_index(key, val));
    else throw ParameterError("unknown timing key '" + key + "'");
  });
  if (c.repeats < 1) throw ParameterError("repeats must be >= 1");
  if (c.k0 + c.k > c.n) throw ParameterError("k0 + k must not exceed n");
  return c;
}

std::vector<TimingRow> timing_mode(const TimingConfig& cfg) {
  const Matrix<double> v = gen_random_orthonormal<double>(cfg.n, cfg.k0, cfg.seed);
  Rng rng(cfg.seed + 17);
  const Matrix<double> a = random_gaussian<double>(rng, cfg.n, cfg.k);

  auto median_ms = [&](auto&& fn) {
    std::vector<double> t;
    for (int i = 0; i < cfg.repeats; ++i) {
      const auto t0 = Clock::now();
      fn();
      t.push_back(elapsed_ms(t0));
    }
    std::sort(t.begin(), t.end());
    const std::size_t m = t.size() / 2;
    return t.size() % 2 ? t[m] : 0.5 * (t[m - 1] + t[m]);
  };

  std::vector<TimingRow> rows;
  auto add = [&](std::string scheme, std::string choice, double ms) {
    TimingRow r;
    r.scheme = std::move(scheme);
    r.choice = std::move(choice);
    r.n = cfg.n;
    r.k0 = cfg.k0;
    r.k = cfg.k;
    r.median_ms = ms;
    rows.push_back(std::move(r));
  };

  const Matrix<double> va = hcat(v, a);
  add("householder_full", "none", median_ms([&] { (void)householder_qr(va); }));
  for (SeedChoice c : kChoices) {
    TwoStageOptions opts;
    opts.choice = c;
    opts.diagnostics = false;
    opts.reflector.check_orthonormality = false;
    add("two_stage", std::string(to_string(c)), median_ms([&] { (void)two_stage_qr(v, a, opts); }));
  }
  BaselineSpec bcgs2;
  bcgs2.scheme = BaselineScheme::BCGS2;
  add("bcgs2", "none", median_ms([&] { (void)bcgs_two_stage(v, a, bcgs2); }));
  add("cholqr2stage", "none", median_ms([&] {
        try {
          (void)cholqr_two_stage(v, a);
        } catch (const NotPositiveDefinite&) {
        }
      }));

  const double base = rows.front().median_ms;
  for (auto& r : rows) r.relative_time = base > 0 ? r.median_ms / base : 0.0;
  return rows;
}

void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows) {
  os << "scheme,choice,n,k0,k,median_ms,relative_time\n";
  for (const auto& r : rows)
    os << r.scheme << ',' << r.choice << ',' << r.n << ',' << r.k0 << ',' << r.k << ',' << format_double(r.median_ms)
       << ',' << format_double(r.relative_time) << '\n';
  if (!os) throw IoError("write_timing_csv: write failed");
}

#define ORTHO_INSTANTIATE(T)                                                                                    \
  template StabilityReport compute_metrics<T>(const Matrix<T>&, const Matrix<T>&, const TwoStageResult<T>&,     \
                                              const InnerProduct<T>&);                                          \
  template StabilityReport compute_metrics<T>(const Matrix<T>&, const BlockQRResult<T>&, const InnerProduct<T>&);

ORTHO_INSTANTIATE(double)
ORTHO_INSTANTIATE(cplx)
#undef ORTHO_INSTANTIATE

}  // namespace ortho
