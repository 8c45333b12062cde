#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memoryflow/csv.hpp"
#include "memoryflow/errors.hpp"
#include "memoryflow/field_solver.hpp"
#include "memoryflow/freespace.hpp"
#include "memoryflow/kernel.hpp"
#include "memoryflow/memory_op.hpp"
#include "memoryflow/parallel.hpp"
#include "memoryflow/scalar_msd.hpp"
#include "memoryflow/walker.hpp"

namespace mf = memoryflow;

namespace {

struct Common {
  std::string outdir = ".";
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--outdir", c.outdir, "output directory");
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

// tabular writer producing either csv or a json array of row objects
class TableWriter {
 public:
  TableWriter(const Common& c, const std::string& base,
              std::vector<std::string> cols)
      : json_(c.format == "json"), cols_(std::move(cols)) {
    name_ = base + (json_ ? ".json" : ".csv");
    path_ = c.outdir + "/" + name_;
    if (json_) {
      out_.open(path_, std::ios::binary);
      if (!out_) throw mf::config_error("cannot open output file " + path_);
      out_ << "[";
    } else {
      csv_.emplace(path_, cols_);
    }
  }

  void row(const std::vector<double>& v) {
    if (!json_) {
      csv_->row(v);
      return;
    }
    if (v.size() != cols_.size())
      throw mf::config_error("row width mismatch in " + path_);
    out_ << (first_ ? "\n" : ",\n") << "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out_ << (i ? "," : "") << '"' << cols_[i] << "\":";
      if (std::isfinite(v[i]))
        out_ << mf::format_g17(v[i]);
      else
        out_ << "null";
    }
    out_ << "}";
    first_ = false;
  }

  // returns the artifact file name
  std::string close() {
    if (json_) {
      out_ << "\n]\n";
      out_.flush();
      if (!out_) throw mf::config_error("write failed for " + path_);
      out_.close();
    } else {
      csv_->close();
    }
    return name_;
  }

 private:
  bool json_;
  std::vector<std::string> cols_;
  std::string name_, path_;
  std::ofstream out_;
  std::optional<mf::CsvWriter> csv_;
  bool first_ = true;
};

struct Manifest {
  std::string section;
  std::vector<std::pair<std::string, std::string>> keys;

  void add(const std::string& k, const std::string& v) { keys.emplace_back(k, v); }
  void add(const std::string& k, double v) { add(k, mf::format_g17(v)); }
  void add(const std::string& k, long long v) { add(k, std::to_string(v)); }
  void add(const std::string& k, int v) { add(k, std::to_string(v)); }
  void add(const std::string& k, const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += mf::format_g17(v[i]);
    }
    add(k, s);
  }
};

void write_manifest(const Common& c, const Manifest& m,
                    const std::vector<std::string>& artifacts) {
  std::string path = c.outdir + "/manifest.ini";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mf::config_error("cannot open " + path);
  out << "[" << m.section << "]\n";
  out << "outdir=" << c.outdir << "\n";
  out << "format=" << c.format << "\n";
  for (const auto& [k, v] : m.keys) out << k << "=" << v << "\n";
  for (const auto& a : artifacts) {
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(mf::fnv1a_file(c.outdir + "/" + a)));
    out << "# artifact " << a << " fnv1a " << hex << "\n";
  }
  out.flush();
  if (!out) throw mf::config_error("write failed for " + path);
}

void prepare_outdir(const Common& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.outdir, ec);
  if (ec) throw mf::config_error("cannot create outdir " + c.outdir);
}

mf::HistorySignal parse_history(const std::string& s) {
  if (s == "zero") return mf::HistorySignal::zero();
  if (s.rfind("affine:", 0) == 0)
    return mf::HistorySignal::affine_scaled(std::stod(s.substr(7)));
  if (s.rfind("step:", 0) == 0) {
    double h, a, b;
    if (std::sscanf(s.c_str() + 5, "%lf,%lf,%lf", &h, &a, &b) != 3)
      throw mf::config_error("--history step form is step:height,t_on,t_off");
    return mf::HistorySignal::step(h, a, b);
  }
  throw mf::config_error("--history must be zero, affine:k or step:h,a,b");
}

mf::Field load_field_csv(const std::string& path, const mf::Grid& grid) {
  std::ifstream in(path);
  if (!in) throw mf::config_error("cannot open history file " + path);
  std::string line;
  std::getline(in, line);  // header
  mf::Field u;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto pos = line.find_last_of(',');
    if (pos == std::string::npos)
      throw mf::config_error("bad row in history file " + path);
    u.push_back(std::stod(line.substr(pos + 1)));
  }
  if (u.size() != grid.field_size())
    throw mf::config_error("history file " + path + " has " +
                           std::to_string(u.size()) + " values, grid needs " +
                           std::to_string(grid.field_size()));
  return u;
}

mf::Field parse_field_history(const std::string& s, const mf::Grid& grid) {
  if (s.rfind("dirac:", 0) == 0) {
    std::string arg = s.substr(6);
    if (grid.dim == 1) return mf::dirac_field(grid, std::stod(arg));
    double cx, cy;
    if (std::sscanf(arg.c_str(), "%lf,%lf", &cx, &cy) != 2)
      throw mf::config_error("--history dirac form in 2d is dirac:x,y");
    return mf::dirac_field_2d(grid, cx, cy);
  }
  if (s == "dirac-ring") return mf::dirac_ring_field(grid);
  if (s.rfind("file:", 0) == 0) return load_field_csv(s.substr(5), grid);
  throw mf::config_error("--history must be dirac:x0, dirac-ring or file:PATH");
}

mf::Model parse_model(const std::string& name, double alpha, double delta,
                      double diffusivity) {
  if (name == "nonlocal")
    return mf::Model::nonlocal(mf::KernelSpec::normalized_fractional(alpha, delta),
                               diffusivity);
  if (name == "local") return mf::Model::local(diffusivity);
  if (name == "fractional") return mf::Model::fractional(alpha, diffusivity);
  throw mf::config_error("--model must be nonlocal, local or fractional");
}

// ---- msd ----------------------------------------------------------------

struct MsdOpts {
  Common common;
  double alpha = 0.5, delta = 0.2;
  double tau = 0.0, T = 0.0, rhs = 2.0;
  std::string history = "zero";
  int smooth_window = 5;
  double threshold = -1.0;
};

int run_msd(const MsdOpts& o) {
  prepare_outdir(o.common);
  double tau = o.tau > 0.0 ? o.tau : o.delta / 128.0;
  double T = o.T > 0.0 ? o.T : 100.0 * o.delta;
  auto spec = mf::KernelSpec::normalized_fractional(o.alpha, o.delta);
  auto w = mf::build_weights(spec, tau);
  auto hist = parse_history(o.history);
  double rhs = o.rhs;
  auto series = mf::solve_scalar(w, hist, [rhs](double) { return rhs; }, T);
  auto slope = mf::local_slope(series);

  TableWriter table(o.common, "msd", {"t", "m", "alpha_eff"});
  for (std::size_t n = 0; n < series.values.size(); ++n)
    table.row({series.time(n), series.values[n], slope.values[n]});
  auto name = table.close();

  auto cr = mf::crossover_time(series, o.alpha, o.smooth_window, o.threshold);
  if (cr.found)
    std::printf("crossover_time=%s\n", mf::format_g17(cr.t).c_str());
  else
    std::printf("no crossover detected\n");

  Manifest m{"msd", {}};
  m.add("alpha", o.alpha);
  m.add("delta", o.delta);
  m.add("tau", tau);
  m.add("T", T);
  m.add("rhs", o.rhs);
  m.add("history", o.history);
  m.add("smooth-window", o.smooth_window);
  m.add("threshold", o.threshold);
  write_manifest(o.common, m, {name});
  return 0;
}

// ---- solve --------------------------------------------------------------

struct SolveOpts {
  Common common;
  int dim = 1;
  double alpha = 0.5, delta = 0.2;
  std::string model = "nonlocal";
  int N = 256;
  double tau = 0.0, T = 0.0, diffusivity = 1.0;
  std::vector<double> record;
  std::string history = "dirac:0.5";
  std::vector<double> domain{0.0, 1.0};
};

int run_solve(const SolveOpts& o) {
  prepare_outdir(o.common);
  if (o.domain.size() != 2) throw mf::config_error("--domain needs a,b");
  double tau = o.tau > 0.0 ? o.tau : o.delta / 128.0;
  auto grid = o.dim == 1 ? mf::Grid::line(o.domain[0], o.domain[1], o.N)
                         : mf::Grid::square(o.domain[0], o.domain[1], o.N);
  auto model = parse_model(o.model, o.alpha, o.delta, o.diffusivity);
  auto hist = parse_field_history(o.history, grid);
  std::vector<double> record = o.record;
  double T = o.T > 0.0 ? o.T : (record.empty() ? 1.0 : record.back());
  if (record.empty()) record = {T};
  auto res = mf::solve(model, grid, hist, tau, T, record);

  std::vector<std::string> artifacts;
  for (std::size_t r = 0; r < res.snapshots.size(); ++r) {
    TableWriter table(o.common, "u_" + std::to_string(r),
                      o.dim == 1 ? std::vector<std::string>{"x", "u"}
                                 : std::vector<std::string>{"x", "y", "u"});
    const auto& u = res.snapshots[r];
    if (o.dim == 1) {
      for (std::size_t i = 0; i < u.size(); ++i)
        table.row({grid.x(static_cast<int>(i)), u[i]});
    } else {
      int n = grid.nodes_per_axis();
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          table.row({grid.x(i), grid.x(j), u[static_cast<std::size_t>(j) * n + i]});
    }
    artifacts.push_back(table.close());
  }
  if (o.dim == 1) {
    TableWriter table(o.common, "msd", {"t", "m"});
    for (std::size_t n = 0; n < res.msd.values.size(); ++n)
      table.row({res.msd.time(n), res.msd.values[n]});
    artifacts.push_back(table.close());
  }

  Manifest m{"solve", {}};
  m.add("dim", o.dim);
  m.add("alpha", o.alpha);
  m.add("delta", o.delta);
  m.add("model", o.model);
  m.add("N", o.N);
  m.add("tau", tau);
  m.add("T", T);
  m.add("record", record);
  m.add("history", o.history);
  m.add("domain", o.domain);
  m.add("diffusivity", o.diffusivity);
  write_manifest(o.common, m, artifacts);
  return 0;
}

// ---- fundamental ---------------------------------------------------------

struct FundamentalOpts {
  Common common;
  double alpha = 0.5, delta = 0.2;
  std::string x_grid = "0:3:31";
  std::vector<double> times;
  int nq = 64;
  double line_tol = 0.0;
};

int run_fundamental(const FundamentalOpts& o) {
  prepare_outdir(o.common);
  double a, b;
  int n;
  if (std::sscanf(o.x_grid.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1)
    throw mf::config_error("--x-grid form is a:b:n");
  if (o.times.empty()) throw mf::config_error("--times must name at least one time");
  auto spec = mf::KernelSpec::normalized_fractional(o.alpha, o.delta);
  mf::InversionContour contour;
  contour.n_q = o.nq;
  contour.line_tol = o.line_tol;

  TableWriter table(o.common, "fundamental", {"x", "t", "u"});
  int warnings = 0;
  for (int i = 0; i < n; ++i) {
    double x = n == 1 ? a : a + (b - a) * i / (n - 1);
    for (double t : o.times) {
      auto r = mf::invert(spec, x, t, contour);
      if (r.warning) ++warnings;
      table.row({x, t, r.value});
    }
  }
  auto name = table.close();
  if (warnings)
    std::fprintf(stderr, "accuracy warning on %d of %d evaluations\n", warnings,
                 n * static_cast<int>(o.times.size()));

  Manifest m{"fundamental", {}};
  m.add("alpha", o.alpha);
  m.add("delta", o.delta);
  m.add("x-grid", o.x_grid);
  m.add("times", o.times);
  m.add("nq", o.nq);
  m.add("line-tol", o.line_tol);
  write_manifest(o.common, m, {name});
  return 0;
}

// ---- peak ----------------------------------------------------------------

struct PeakOpts {
  Common common;
  double alpha = 0.2, delta = 0.1;
  double tmin = 1e-5, tmax = 100.0;
  int npoints = 41;
};

int run_peak(const PeakOpts& o) {
  prepare_outdir(o.common);
  if (!(o.tmin > 0.0) || !(o.tmax > o.tmin) || o.npoints < 2)
    throw mf::config_error("--tmin/--tmax/--npoints must give a log grid");
  auto spec = mf::KernelSpec::normalized_fractional(o.alpha, o.delta);
  TableWriter table(o.common, "peak",
                    {"t", "u0", "asymptote_small", "asymptote_large"});
  double lr = std::log(o.tmax / o.tmin);
  for (int i = 0; i < o.npoints; ++i) {
    double t = o.tmin * std::exp(lr * i / (o.npoints - 1));
    auto r = mf::invert(spec, 0.0, t, {});
    table.row({t, r.value, mf::peak_asymptote_early(spec, t),
               mf::peak_asymptote_late(spec, t)});
  }
  auto name = table.close();

  Manifest m{"peak", {}};
  m.add("alpha", o.alpha);
  m.add("delta", o.delta);
  m.add("tmin", o.tmin);
  m.add("tmax", o.tmax);
  m.add("npoints", o.npoints);
  write_manifest(o.common, m, {name});
  return 0;
}

// ---- walk ----------------------------------------------------------------

struct WalkOpts {
  Common common;
  double alpha = 0.75, delta = 0.2;
  double tau = 0.0;
  long long particles = 100000;
  std::uint64_t seed = 1;
  std::vector<double> times;
  std::string calibrate = "auto";
};

int run_walk(const WalkOpts& o) {
  prepare_outdir(o.common);
  double tau = o.tau > 0.0 ? o.tau : o.delta / 64.0;
  if (o.times.empty()) throw mf::config_error("--times must name at least one time");
  auto pmf = mf::build_pmf(o.alpha, o.delta, tau);

  mf::WalkerConfig cfg;
  cfg.alpha = o.alpha;
  cfg.delta = o.delta;
  cfg.tau = tau;
  cfg.particles = o.particles;
  cfg.seed = o.seed;
  cfg.record_times = o.times;
  if (o.calibrate == "auto") {
    cfg.h = mf::calibrated_h(o.alpha, o.delta, tau);
  } else if (o.calibrate.rfind("h=", 0) == 0) {
    cfg.h = std::stod(o.calibrate.substr(2));
  } else {
    throw mf::config_error("--calibrate must be auto or h=VALUE");
  }

  auto res = mf::simulate(cfg, pmf);

  TableWriter density(o.common, "walk_density", {"t", "x", "density"});
  for (std::size_t r = 0; r < res.times.size(); ++r) {
    auto d = res.density(r);
    for (std::size_t s = 0; s < d.size(); ++s)
      density.row({res.times[r], res.x(static_cast<int>(s)), d[s]});
  }
  auto dname = density.close();

  TableWriter msd(o.common, "walk_msd", {"t", "msd", "stderr"});
  for (std::size_t r = 0; r < res.times.size(); ++r)
    msd.row({res.times[r], res.msd[r], res.msd_stderr[r]});
  auto mname = msd.close();

  std::printf("arrival_density_check=%s\n",
              mf::format_g17(mf::arrival_density_check(res, pmf)).c_str());

  Manifest m{"walk", {}};
  m.add("alpha", o.alpha);
  m.add("delta", o.delta);
  m.add("tau", tau);
  m.add("particles", o.particles);
  m.add("seed", static_cast<long long>(o.seed));
  m.add("times", o.times);
  m.add("calibrate", o.calibrate);
  write_manifest(o.common, m, {dname, mname});
  return 0;
}

// ---- compare ---------------------------------------------------------------

struct CompareOpts {
  Common common;
  double alpha = 0.5, delta = 0.1;
  int N = 256;
  double tau = 0.0, T = 0.0, diffusivity = 1.0;
  std::vector<double> record;
  std::string history = "dirac:0.5";
  std::vector<double> domain{0.0, 1.0};
  std::string base = "compare";
};

int run_compare(const CompareOpts& o) {
  prepare_outdir(o.common);
  if (o.domain.size() != 2) throw mf::config_error("--domain needs a,b");
  double tau = o.tau > 0.0 ? o.tau : o.delta / 128.0;
  auto grid = mf::Grid::line(o.domain[0], o.domain[1], o.N);
  auto hist = parse_field_history(o.history, grid);
  std::vector<double> record = o.record;
  double T = o.T > 0.0 ? o.T : (record.empty() ? 1.0 : record.back());
  if (record.empty()) record = {T};

  const char* names[3] = {"nonlocal", "local", "fractional"};
  std::vector<mf::SolveResult> results(3);
  mf::parallel_for(3, 3, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      results[i] = mf::solve(parse_model(names[i], o.alpha, o.delta, o.diffusivity),
                             grid, hist, tau, T, record);
  });

  TableWriter table(o.common, o.base,
                    {"t", "x", "u_nonlocal", "u_local", "u_fractional"});
  for (std::size_t r = 0; r < record.size(); ++r)
    for (std::size_t i = 0; i < grid.field_size(); ++i)
      table.row({record[r], grid.x(static_cast<int>(i)), results[0].snapshots[r][i],
                 results[1].snapshots[r][i], results[2].snapshots[r][i]});
  auto name = table.close();

  Manifest m{"compare", {}};
  m.add("alpha", o.alpha);
  m.add("delta", o.delta);
  m.add("N", o.N);
  m.add("tau", tau);
  m.add("T", T);
  m.add("record", record);
  m.add("history", o.history);
  m.add("domain", o.domain);
  m.add("diffusivity", o.diffusivity);
  write_manifest(o.common, m, {name});
  return 0;
}

// ---- weights ---------------------------------------------------------------

struct WeightsOpts {
  Common common;
  double alpha = 0.5, delta = 0.2;
  double tau = 0.0;
  std::string family = "normalized";
};

int run_weights(const WeightsOpts& o) {
  prepare_outdir(o.common);
  double tau = o.tau > 0.0 ? o.tau : o.delta / 64.0;
  mf::KernelSpec spec =
      o.family == "normalized"
          ? mf::KernelSpec::normalized_fractional(o.alpha, o.delta)
      : o.family == "caputo" ? mf::KernelSpec::truncated_caputo(o.alpha, o.delta)
      : o.family.rfind("file:", 0) == 0
          ? mf::load_kernel_csv(o.family.substr(5))
          : throw mf::config_error("--family must be normalized, caputo or file:PATH");
  auto w = mf::build_weights(spec, tau);
  TableWriter table(o.common, "weights", {"k", "w_k"});
  for (int k = 1; k <= w.M; ++k) table.row({static_cast<double>(k), w.w[k - 1]});
  auto name = table.close();

  Manifest m{"weights", {}};
  m.add("alpha", o.alpha);
  m.add("delta", o.delta);
  m.add("tau", tau);
  m.add("family", o.family);
  write_manifest(o.common, m, {name});
  return 0;
}

// ---- reproduce -------------------------------------------------------------

int run_reproduce(const std::string& fig, const Common& common) {
  prepare_outdir(common);
  std::vector<std::string> artifacts;

  if (fig == "fig1") {
    PeakOpts o;
    o.common = common;
    o.alpha = 0.2;
    o.delta = 0.1;
    return run_peak(o);
  }
  if (fig == "fig2" || fig == "fig2a") {
    MsdOpts o;
    o.common = common;
    o.alpha = 0.2;
    o.delta = 0.5;
    o.history = "zero";
    return run_msd(o);
  }
  if (fig == "fig3") {
    double alpha = 0.2, delta = 0.5, tau = delta / 256.0, T = 1.0;
    auto spec = mf::KernelSpec::normalized_fractional(alpha, delta);
    auto w = mf::build_weights(spec, tau);
    const std::string histories[3] = {"affine:5", "affine:0.5", "step:10,-0.5,-0.25"};
    std::vector<mf::TimeSeries> series(3);
    for (int i = 0; i < 3; ++i)
      series[i] = mf::solve_scalar(w, parse_history(histories[i]),
                                   [](double) { return 2.0; }, T);
    TableWriter table(common, "fig3", {"t", "m_g1", "m_g2", "m_g3"});
    for (std::size_t n = 0; n < series[0].values.size(); ++n)
      table.row({series[0].time(n), series[0].values[n], series[1].values[n],
                 series[2].values[n]});
    artifacts.push_back(table.close());
    Manifest m{"reproduce", {}};
    m.add("fig", fig);
    write_manifest(common, m, artifacts);
    return 0;
  }
  if (fig == "fig4") {
    CompareOpts o;
    o.common = common;
    o.alpha = 0.5;
    o.delta = 0.2;
    o.N = 1024;
    o.tau = o.delta / 64.0;
    o.domain = {-8.0, 8.0};
    o.history = "dirac:0";
    o.record = {0.1, 0.3, 0.7};
    o.base = "fig4";
    return run_compare(o);
  }
  if (fig == "fig5") {
    double alpha = 0.5, t = 0.5, tau = 1.0 / 256.0;
    std::vector<double> deltas = {0.5, 0.25, 0.125, 0.0625};
    std::vector<double> record = {0.1, 0.5};
    auto grid = mf::Grid::line(-4.0, 4.0, 1024);
    auto hist = mf::dirac_field(grid, 0.0);
    std::vector<mf::SolveResult> res(deltas.size() + 1);
    mf::parallel_for(deltas.size() + 1, 0, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        auto model = i < deltas.size()
                         ? mf::Model::nonlocal(mf::KernelSpec::normalized_fractional(
                               alpha, deltas[i]))
                         : mf::Model::local();
        res[i] = mf::solve(model, grid, hist, tau, t, record);
      }
    });
    TableWriter table(common, "fig5",
                      {"t", "x", "u_d1", "u_d2", "u_d3", "u_d4", "u_local"});
    for (std::size_t r = 0; r < record.size(); ++r)
      for (std::size_t i = 0; i < grid.field_size(); ++i)
        table.row({record[r], grid.x(static_cast<int>(i)), res[0].snapshots[r][i],
                   res[1].snapshots[r][i], res[2].snapshots[r][i],
                   res[3].snapshots[r][i], res[4].snapshots[r][i]});
    artifacts.push_back(table.close());
    Manifest m{"reproduce", {}};
    m.add("fig", fig);
    m.add("deltas", deltas);
    write_manifest(common, m, artifacts);
    return 0;
  }
  if (fig == "fig6") {
    CompareOpts o;
    o.common = common;
    o.alpha = 0.5;
    o.delta = 0.1;
    o.N = 256;
    o.tau = o.delta / 128.0;
    o.domain = {0.0, 1.0};
    o.history = "dirac:0.5";
    o.record = {0.05, 0.15, 0.25};
    o.base = "fig6";
    return run_compare(o);
  }
  if (fig == "fig7") {
    SolveOpts o;
    o.common = common;
    o.dim = 2;
    o.alpha = 0.5;
    o.delta = 1.0;
    o.model = "nonlocal";
    o.N = 48;
    o.tau = 0.01;
    o.T = 1.1;
    o.record = {0.01, 0.1, 1.1};
    o.history = "dirac-ring";
    o.domain = {0.0, 1.0};
    return run_solve(o);
  }
  if (fig == "fig8") {
    double alpha = 0.75, delta = 0.2, tau = delta / 64.0;
    WalkOpts w;
    w.common = common;
    w.alpha = alpha;
    w.delta = delta;
    w.tau = tau;
    w.particles = 200000;
    w.seed = 7;
    w.times = {0.1, 0.2, 0.3, 0.4};

    auto pmf = mf::build_pmf(alpha, delta, tau);
    mf::WalkerConfig cfg;
    cfg.alpha = alpha;
    cfg.delta = delta;
    cfg.tau = tau;
    cfg.particles = w.particles;
    cfg.seed = w.seed;
    cfg.record_times = w.times;
    cfg.h = mf::calibrated_h(alpha, delta, tau);
    auto res = mf::simulate(cfg, pmf);

    int S = res.site_offset;
    auto grid = mf::Grid::line(-S * res.h, S * res.h, 2 * S);
    double c = mf::c_coefficient(alpha, delta);
    double D = c * res.h * res.h / (2.0 * std::pow(tau, alpha));
    auto fd = mf::solve(
        mf::Model::nonlocal(mf::KernelSpec::normalized_fractional(alpha, delta), D),
        grid, mf::dirac_field(grid, 0.0), tau, w.times.back(), w.times);

    TableWriter table(common, "fig8", {"t", "x", "density_mc", "density_fd"});
    for (std::size_t r = 0; r < res.times.size(); ++r) {
      auto d = res.density(r);
      for (std::size_t s = 0; s < d.size(); ++s)
        table.row({res.times[r], res.x(static_cast<int>(s)), d[s],
                   fd.snapshots[r][s]});
    }
    artifacts.push_back(table.close());
    Manifest m{"reproduce", {}};
    m.add("fig", fig);
    m.add("particles", w.particles);
    m.add("seed", static_cast<long long>(w.seed));
    write_manifest(common, m, artifacts);
    return 0;
  }
  throw mf::config_error("unknown figure " + fig +
                         " (expected fig1..fig8, fig2a)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal-in-time diffusion toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file (flags win)");
  app.get_config_formatter_base()->comment('#');

  MsdOpts msd;
  auto* msd_cmd = app.add_subcommand("msd", "scalar MSD trajectory with history data");
  msd_cmd->configurable();
  add_common(msd_cmd, msd.common);
  msd_cmd->add_option("--alpha", msd.alpha, "fractional order in (0,1)");
  msd_cmd->add_option("--delta", msd.delta, "memory horizon");
  msd_cmd->add_option("--tau", msd.tau, "time step (default delta/128)");
  msd_cmd->add_option("--T", msd.T, "end time (default 100*delta)");
  msd_cmd->add_option("--rhs", msd.rhs, "constant right-hand side");
  msd_cmd->add_option("--history", msd.history, "zero | affine:k | step:h,a,b");
  msd_cmd->add_option("--smooth-window", msd.smooth_window, "slope smoothing nodes");
  msd_cmd->add_option("--threshold", msd.threshold,
                      "crossover threshold (default (alpha+1)/2)");

  SolveOpts solve;
  auto* solve_cmd = app.add_subcommand("solve", "field solve on a bounded domain");
  solve_cmd->configurable();
  add_common(solve_cmd, solve.common);
  solve_cmd->add_option("--dim", solve.dim)->check(CLI::IsMember({1, 2}));
  solve_cmd->add_option("--alpha", solve.alpha, "fractional order in (0,1)");
  solve_cmd->add_option("--delta", solve.delta, "memory horizon");
  solve_cmd->add_option("--model", solve.model, "nonlocal | local | fractional");
  solve_cmd->add_option("--N", solve.N, "intervals per axis");
  solve_cmd->add_option("--tau", solve.tau, "time step (default delta/128)");
  solve_cmd->add_option("--T", solve.T, "end time");
  solve_cmd->add_option("--record", solve.record, "snapshot times")->delimiter(',');
  solve_cmd->add_option("--history", solve.history,
                        "dirac:x0 | dirac-ring | file:PATH");
  solve_cmd->add_option("--domain", solve.domain, "axis extent a,b")->delimiter(',');
  solve_cmd->add_option("--diffusivity", solve.diffusivity, "diffusion coefficient");

  FundamentalOpts fund;
  auto* fund_cmd =
      app.add_subcommand("fundamental", "free-space fundamental solution values");
  fund_cmd->configurable();
  add_common(fund_cmd, fund.common);
  fund_cmd->add_option("--alpha", fund.alpha, "fractional order in (0,1)");
  fund_cmd->add_option("--delta", fund.delta, "memory horizon");
  fund_cmd->add_option("--x-grid", fund.x_grid, "evaluation grid a:b:n");
  fund_cmd->add_option("--times", fund.times, "evaluation times")->delimiter(',');
  fund_cmd->add_option("--nq", fund.nq, "contour nodes");
  fund_cmd->add_option("--line-tol", fund.line_tol,
                       "short-time route tolerance (0 = per-regime default)");

  PeakOpts peak;
  auto* peak_cmd =
      app.add_subcommand("peak", "peak value trajectory with both asymptotes");
  peak_cmd->configurable();
  add_common(peak_cmd, peak.common);
  peak_cmd->add_option("--alpha", peak.alpha, "fractional order in (0,1)");
  peak_cmd->add_option("--delta", peak.delta, "memory horizon");
  peak_cmd->add_option("--tmin", peak.tmin, "first time");
  peak_cmd->add_option("--tmax", peak.tmax, "last time");
  peak_cmd->add_option("--npoints", peak.npoints, "log-spaced sample count");

  WalkOpts walk;
  auto* walk_cmd = app.add_subcommand("walk", "Monte Carlo trapping walk");
  walk_cmd->configurable();
  add_common(walk_cmd, walk.common);
  walk_cmd->add_option("--alpha", walk.alpha, "fractional order in (0,1)");
  walk_cmd->add_option("--delta", walk.delta, "memory horizon");
  walk_cmd->add_option("--tau", walk.tau, "waiting-time step (default delta/64)");
  walk_cmd->add_option("--particles", walk.particles, "particle count");
  walk_cmd->add_option("--seed", walk.seed, "rng seed");
  walk_cmd->add_option("--times", walk.times, "record times")->delimiter(',');
  walk_cmd->add_option("--calibrate", walk.calibrate, "auto | h=VALUE");

  CompareOpts compare;
  auto* compare_cmd =
      app.add_subcommand("compare", "nonlocal/local/fractional side by side");
  compare_cmd->configurable();
  add_common(compare_cmd, compare.common);
  compare_cmd->add_option("--alpha", compare.alpha, "fractional order in (0,1)");
  compare_cmd->add_option("--delta", compare.delta, "memory horizon");
  compare_cmd->add_option("--N", compare.N, "intervals");
  compare_cmd->add_option("--tau", compare.tau, "time step (default delta/128)");
  compare_cmd->add_option("--T", compare.T, "end time");
  compare_cmd->add_option("--record", compare.record, "snapshot times")
      ->delimiter(',');
  compare_cmd->add_option("--history", compare.history,
                          "dirac:x0 | dirac-ring | file:PATH");
  compare_cmd->add_option("--domain", compare.domain, "axis extent a,b")
      ->delimiter(',');
  compare_cmd->add_option("--diffusivity", compare.diffusivity,
                          "diffusion coefficient");

  WeightsOpts weights;
  auto* weights_cmd = app.add_subcommand("weights", "dump quadrature weights");
  weights_cmd->configurable();
  add_common(weights_cmd, weights.common);
  weights_cmd->add_option("--alpha", weights.alpha, "fractional order in (0,1)");
  weights_cmd->add_option("--delta", weights.delta, "memory horizon");
  weights_cmd->add_option("--tau", weights.tau, "time step (default delta/64)");
  weights_cmd->add_option("--family", weights.family,
                          "normalized | caputo | file:PATH");

  std::string fig;
  Common repro_common;
  auto* repro_cmd = app.add_subcommand("reproduce", "canned figure parameter sets");
  repro_cmd->configurable();
  add_common(repro_cmd, repro_common);
  repro_cmd->add_option("fig", fig, "fig1..fig8")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (msd_cmd->parsed()) return run_msd(msd);
    if (solve_cmd->parsed()) return run_solve(solve);
    if (fund_cmd->parsed()) return run_fundamental(fund);
    if (peak_cmd->parsed()) return run_peak(peak);
    if (walk_cmd->parsed()) return run_walk(walk);
    if (compare_cmd->parsed()) return run_compare(compare);
    if (weights_cmd->parsed()) return run_weights(weights);
    if (repro_cmd->parsed()) return run_reproduce(fig, repro_common);
  } catch (const mf::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const mf::numerics_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  return 0;
}
