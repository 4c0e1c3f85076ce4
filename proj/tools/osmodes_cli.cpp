// Command-line front end over the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <array>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "osmodes/osmodes.h"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') r += '\\';
    if (ch == '\n') {
      r += "\\n";
      continue;
    }
    r += ch;
  }
  return r + "\"";
}

// Insertion-ordered JSON object with preformatted values.
class Json {
 public:
  Json& add(const std::string& k, double v) { return raw(k, std::isfinite(v) ? num(v) : "null"); }
  Json& add(const std::string& k, int v) { return raw(k, std::to_string(v)); }
  Json& add(const std::string& k, bool v) { return raw(k, v ? "true" : "false"); }
  Json& add(const std::string& k, const std::string& v) { return raw(k, quoted(v)); }
  Json& add(const std::string& k, const char* v) { return raw(k, quoted(v)); }
  Json& add(const std::string& k, const Json& v) { return raw(k, v.str()); }
  Json& add(const std::string& k, const std::vector<double>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + (std::isfinite(v[i]) ? num(v[i]) : "null");
    return raw(k, s + "]");
  }
  Json& raw(const std::string& k, const std::string& v) {
    items_.emplace_back(k, v);
    return *this;
  }
  std::string str() const {
    std::string s = "{";
    for (size_t i = 0; i < items_.size(); ++i)
      s += (i ? ", " : "") + quoted(items_[i].first) + ": " + items_[i].second;
    return s + "}";
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

struct Failure {
  int exit_code;
  std::string name, message;
};

void check(osm_status s) {
  if (s == OSM_OK) return;
  int code = s == OSM_INVALID_ARGUMENT ? 1 : 2;
  throw Failure{code, osm_status_name(s), osm_last_error()};
}

void usage_error(const std::string& msg) { throw Failure{1, "UsageError", msg}; }

struct Config {
  std::string profile = "poiseuille";
  std::string out;
  std::string format;
  int workers = 0;
  bool no_meta = false;
  double alpha = NAN, reynolds = NAN;
  double c_re = NAN, c_im = NAN;
  std::string reynolds_range;
  std::string reynolds_list;
  std::string beta_list = "0.125";
  std::string branch = "lower";
  double A = 1.0;
  double a_min = 0.2, a_max = 5.0;
  int a_count = 25;
  double rel_tol = 1e-3;
  int N = 120, dN = 40;
  int points = 101;
  double z0 = NAN;
  int part = 2, order = 0;
  std::string z_list;
  osm_numerics num{};
};

class Profile {
 public:
  explicit Profile(const std::string& spec) { check(osm_profile_create(spec.c_str(), &p_)); }
  ~Profile() { osm_profile_destroy(p_); }
  Profile(const Profile&) = delete;
  Profile& operator=(const Profile&) = delete;
  const osm_profile* get() const { return p_; }

 private:
  osm_profile* p_ = nullptr;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      v.push_back(std::stod(tok, &used));
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
      if (used != tok.size()) usage_error("bad number in list: " + tok);
    } catch (const std::logic_error&) {
      usage_error("bad number in list: " + tok);
    }
  }
  if (v.empty()) usage_error("empty list");
  return v;
}

// "lo:hi:logN" gives N log-spaced values, "lo:hi:N" N linear values, otherwise a list.
std::vector<double> parse_range(const std::string& s) {
  auto c1 = s.find(':');
  if (c1 == std::string::npos) return parse_list(s);
  auto c2 = s.find(':', c1 + 1);
  if (c2 == std::string::npos) usage_error("range needs lo:hi:count");
  double lo = parse_list(s.substr(0, c1))[0], hi = parse_list(s.substr(c1 + 1, c2 - c1 - 1))[0];
  std::string cnt = s.substr(c2 + 1);
  bool lg = cnt.rfind("log", 0) == 0;
  if (lg) cnt = cnt.substr(3);
  int n = int(parse_list(cnt)[0]);
  if (n < 1 || !(hi >= lo) || (lg && lo <= 0.0)) usage_error("ill-formed range " + s);
  std::vector<double> v;
  for (int i = 0; i < n; ++i) {
    double t = n == 1 ? 0.0 : double(i) / (n - 1);
    v.push_back(lg ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo));
  }
  return v;
}

void need(double v, const char* flag) {
  if (std::isnan(v)) usage_error(std::string("missing --") + flag);
}

class Output {
 public:
  explicit Output(const Config& cfg) : cfg_(cfg) {}
  void line(const std::string& s) { buf_ += s + "\n"; }
  void meta(const std::string& command) {
    if (cfg_.no_meta) return;
    line("# osmodes " + std::string(kVersion) + " " + command + " profile=" + cfg_.profile);
  }
  void flush() {
    if (cfg_.out.empty()) {
      std::fwrite(buf_.data(), 1, buf_.size(), stdout);
      return;
    }
    std::ofstream f(cfg_.out, std::ios::binary);
    if (!f) usage_error("cannot open " + cfg_.out);
    f << buf_;
  }

 private:
  const Config& cfg_;
  std::string buf_;
};

Json meta_json(const Config& cfg, const std::string& command) {
  Json m;
  m.add("version", kVersion).add("command", command).add("profile", cfg.profile);
  return m;
}

int workers(const Config& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  unsigned n = std::thread::hardware_concurrency();
  return n ? int(n) : 1;
}

void run_eigen(const Config& cfg) {
  need(cfg.alpha, "alpha");
  need(cfg.reynolds, "reynolds");
  Profile p(cfg.profile);
  osm_eigen_result r{};
  osm_complex seed{cfg.c_re, cfg.c_im};
  bool has_seed = !std::isnan(cfg.c_re) && !std::isnan(cfg.c_im);
  check(osm_solve_eigenvalue(p.get(), cfg.alpha, cfg.reynolds, has_seed ? &seed : nullptr, &cfg.num, &r));
  Output o(cfg);
  if (cfg.format == "csv") {
    o.meta("eigen");
    o.line("alpha,R,c_re,c_im,growth_rate,residual,iterations");
    o.line(num(r.alpha) + "," + num(r.R) + "," + num(r.c.re) + "," + num(r.c.im) + "," + num(r.growth_rate) + "," +
           num(r.residual) + "," + std::to_string(r.iterations));
  } else {
    Json j;
    j.add("alpha", r.alpha).add("R", r.R).add("c_re", r.c.re).add("c_im", r.c.im);
    j.add("growth_rate", r.growth_rate).add("residual", r.residual).add("iterations", r.iterations);
    if (!cfg.no_meta) j.add("meta", meta_json(cfg, "eigen"));
    o.line(j.str());
  }
  o.flush();
}

struct CurveRow {
  double R = 0.0;
  double A = NAN, alpha = NAN, im_c = NAN;
  std::string status;
};

void run_neutral_curve(const Config& cfg) {
  if (cfg.reynolds_range.empty() && std::isnan(cfg.reynolds)) usage_error("missing --reynolds");
  if (cfg.branch != "lower" && cfg.branch != "upper") usage_error("--branch must be lower or upper");
  std::vector<double> Rs = cfg.reynolds_range.empty() ? std::vector<double>{cfg.reynolds} : parse_range(cfg.reynolds_range);
  if (cfg.a_count < 2 || !(cfg.a_max > cfg.a_min) || cfg.a_min <= 0.0) usage_error("bad A grid");
  std::vector<double> A;
  for (int i = 0; i < cfg.a_count; ++i)
    A.push_back(std::exp(std::log(cfg.a_min) + i * (std::log(cfg.a_max) - std::log(cfg.a_min)) / (cfg.a_count - 1)));
  bool lower = cfg.branch == "lower";
  double beta = lower ? 1.0 / 7.0 : 1.0 / 11.0;
  Profile p(cfg.profile);
  std::vector<CurveRow> rows(Rs.size());
  struct Job {
    const Config* cfg;
    const Profile* p;
    const std::vector<double>* Rs;
    const std::vector<double>* A;
    std::vector<CurveRow>* rows;
    double beta;
    bool lower;
  } job{&cfg, &p, &Rs, &A, &rows, beta, lower};
  osm_parallel_for(Rs.size(), workers(cfg), [](size_t i, void* u) {
    auto& jb = *static_cast<Job*>(u);
    CurveRow& row = (*jb.rows)[i];
    row.R = (*jb.Rs)[i];
    osm_branch_scan* scan = nullptr;
    osm_status s = osm_scan_branch(jb.p->get(), row.R, jb.beta, jb.A->data(), jb.A->size(), jb.cfg->rel_tol,
                                   &jb.cfg->num, &scan);
    if (s != OSM_OK) {
      row.status = osm_status_name(s);
      return;
    }
    // Lower branch: first stable-to-unstable change; upper: last unstable-to-stable change.
    size_t nc = osm_branch_scan_crossings(scan);
    row.status = "no crossing";
    for (size_t k = 0; k < nc; ++k) {
      size_t idx = jb.lower ? k : nc - 1 - k;
      osm_complex c;
      double a = osm_branch_scan_crossing(scan, idx, &c);
      // Direction from the nearest sampled point below the crossing.
      double below_im = NAN;
      for (size_t q = 0; q < osm_branch_scan_points(scan); ++q) {
        osm_branch_point pt = osm_branch_scan_point(scan, q);
        if (pt.converged && pt.A < a) below_im = pt.c.im;
      }
      bool rising = below_im < 0.0;
      if (rising != jb.lower) continue;
      row.A = a;
      row.alpha = a * std::pow(row.R, -jb.beta);
      row.im_c = c.im;
      row.status = "ok";
      break;
    }
    osm_branch_scan_destroy(scan);
  }, &job);
  Output o(cfg);
  if (cfg.format == "json") {
    std::string arr = "[";
    for (size_t i = 0; i < rows.size(); ++i) {
      Json j;
      j.add("R", rows[i].R).add("A_crossing", rows[i].A).add("alpha", rows[i].alpha);
      j.add("im_c_at_crossing", rows[i].im_c).add("status", rows[i].status);
      arr += (i ? ", " : "") + j.str();
    }
    Json top;
    top.add("branch", cfg.branch).raw("rows", arr + "]");
    if (!cfg.no_meta) top.add("meta", meta_json(cfg, "neutral-curve"));
    o.line(top.str());
  } else {
    o.meta("neutral-curve branch=" + cfg.branch);
    o.line("R,A_crossing,alpha,im_c_at_crossing,status");
    for (const auto& r : rows)
      o.line(num(r.R) + "," + num(r.A) + "," + num(r.alpha) + "," + num(r.im_c) + "," + r.status);
  }
  o.flush();
}

void run_sweep(const Config& cfg) {
  if (cfg.reynolds_list.empty()) usage_error("missing --reynolds-list");
  std::vector<double> betas = parse_list(cfg.beta_list);
  std::vector<double> Rs = parse_range(cfg.reynolds_list);
  Profile p(cfg.profile);
  std::vector<osm_growth_row> rows(betas.size() * Rs.size());
  check(osm_growth_rates(p.get(), betas.data(), betas.size(), Rs.data(), Rs.size(), cfg.A, workers(cfg), &cfg.num,
                         rows.data()));
  // Slopes of log Im c and log(alpha Im c) against log R per beta, over unstable converged rows.
  std::map<double, std::pair<double, double>> slopes;
  for (double b : betas) {
    std::vector<double> x, yi, yg;
    bool ok = true;
    for (const auto& r : rows)
      if (r.beta == b) {
        ok &= r.converged && r.c.im > 0.0;
        if (r.converged && r.c.im > 0.0) {
          x.push_back(std::log(r.R));
          yi.push_back(std::log(r.c.im));
          yg.push_back(std::log(r.growth_rate));
        }
      }
    double si = NAN, sg = NAN;
    if (ok && x.size() >= 2) {
      check(osm_fit_slope(x.data(), yi.data(), x.size(), &si));
      check(osm_fit_slope(x.data(), yg.data(), x.size(), &sg));
    }
    slopes[b] = {si, sg};
  }
  Output o(cfg);
  if (cfg.format == "json") {
    std::string arr = "[";
    for (size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      Json j;
      j.add("beta", r.beta).add("R", r.R).add("alpha", r.alpha).add("converged", bool(r.converged));
      j.add("c_re", r.c.re).add("im_c", r.c.im).add("growth_rate", r.growth_rate);
      j.add("slope_im_c", slopes[r.beta].first).add("slope_growth", slopes[r.beta].second);
      arr += (i ? ", " : "") + j.str();
    }
    Json top;
    top.add("A", cfg.A).raw("rows", arr + "]");
    if (!cfg.no_meta) top.add("meta", meta_json(cfg, "sweep"));
    o.line(top.str());
  } else {
    o.meta("sweep A=" + num(cfg.A));
    o.line("beta,R,alpha,converged,c_re,im_c,growth_rate,slope_im_c,slope_growth");
    for (const auto& r : rows)
      o.line(num(r.beta) + "," + num(r.R) + "," + num(r.alpha) + "," + std::to_string(r.converged) + "," +
             num(r.converged ? r.c.re : NAN) + "," + num(r.converged ? r.c.im : NAN) + "," +
             num(r.converged ? r.growth_rate : NAN) + "," + num(slopes[r.beta].first) + "," +
             num(slopes[r.beta].second));
  }
  o.flush();
}

class Context {
 public:
  Context(const Profile& p, double alpha, double R, osm_complex c, const osm_numerics& n) {
    check(osm_context_create(p.get(), alpha, R, c, &n, &ctx_));
  }
  ~Context() { osm_context_destroy(ctx_); }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;
  const osm_context* get() const { return ctx_; }

 private:
  osm_context* ctx_ = nullptr;
};

osm_complex wave_speed(const Config& cfg, const Profile& p) {
  if (!std::isnan(cfg.c_re) && !std::isnan(cfg.c_im)) return {cfg.c_re, cfg.c_im};
  osm_eigen_result r{};
  check(osm_solve_eigenvalue(p.get(), cfg.alpha, cfg.reynolds, nullptr, &cfg.num, &r));
  return r.c;
}

void run_modes(const Config& cfg) {
  need(cfg.alpha, "alpha");
  need(cfg.reynolds, "reynolds");
  if (cfg.points < 2) usage_error("--points must be at least 2");
  Profile p(cfg.profile);
  osm_complex c = wave_speed(cfg, p);
  Context ctx(p, cfg.alpha, cfg.reynolds, c, cfg.num);
  osm_modes* m = nullptr;
  check(osm_modes_build(ctx.get(), &m));
  std::unique_ptr<osm_modes, void (*)(osm_modes*)> guard(m, osm_modes_destroy);
  osm_complex K[4];
  osm_modes_ratios(m, K);
  double res[4];
  for (int j = 1; j <= 4; ++j) check(osm_modes_residual(m, j, &res[j - 1]));
  std::vector<double> zs;
  for (int i = 0; i < cfg.points; ++i) zs.push_back(double(i) / (cfg.points - 1));
  std::vector<std::array<osm_complex, 2>> vals[4];
  for (int j = 1; j <= 4; ++j)
    for (double z : zs) {
      osm_complex v[2];
      check(osm_modes_at(m, j, z, v));
      vals[j - 1].push_back({v[0], v[1]});
    }
  Output o(cfg);
  if (cfg.format == "csv") {
    o.meta("modes");
    o.line("record,mode,z,re_phi,im_phi,re_dphi,im_dphi,log_scale");
    for (int j = 0; j < 4; ++j)
      o.line("ratio," + std::to_string(j + 1) + ",nan," + num(K[j].re) + "," + num(K[j].im) + ",nan,nan,0.0000000000000000e+00");
    for (int j = 0; j < 4; ++j)
      o.line("residual," + std::to_string(j + 1) + ",nan," + num(res[j]) + ",0.0000000000000000e+00,nan,nan,0.0000000000000000e+00");
    for (int j = 0; j < 4; ++j)
      for (size_t i = 0; i < zs.size(); ++i)
        o.line("value," + std::to_string(j + 1) + "," + num(zs[i]) + "," + num(vals[j][i][0].re) + "," +
               num(vals[j][i][0].im) + "," + num(vals[j][i][1].re) + "," + num(vals[j][i][1].im) + "," +
               num(osm_modes_log_scale(m, j + 1)));
  } else {
    Json top;
    top.add("alpha", cfg.alpha).add("R", cfg.reynolds).add("c_re", c.re).add("c_im", c.im);
    Json ratios;
    for (int j = 0; j < 4; ++j) {
      std::string k = "K" + std::to_string(j + 1);
      ratios.add(k + "_re", K[j].re).add(k + "_im", K[j].im);
    }
    top.add("ratios", ratios).add("residuals", std::vector<double>(res, res + 4)).add("z", zs);
    std::string arr = "[";
    for (int j = 0; j < 4; ++j) {
      std::vector<double> a, b, da, db;
      for (const auto& v : vals[j]) {
        a.push_back(v[0].re);
        b.push_back(v[0].im);
        da.push_back(v[1].re);
        db.push_back(v[1].im);
      }
      Json mj;
      mj.add("mode", j + 1).add("log_scale", osm_modes_log_scale(m, j + 1));
      mj.add("phi_re", a).add("phi_im", b).add("dphi_re", da).add("dphi_im", db);
      arr += (j ? ", " : "") + mj.str();
    }
    top.raw("modes", arr + "]");
    if (!cfg.no_meta) top.add("meta", meta_json(cfg, "modes"));
    o.line(top.str());
  }
  o.flush();
}

void run_validate(const Config& cfg) {
  need(cfg.alpha, "alpha");
  need(cfg.reynolds, "reynolds");
  Profile p(cfg.profile);
  osm_eigen_result r{};
  check(osm_solve_eigenvalue(p.get(), cfg.alpha, cfg.reynolds, nullptr, &cfg.num, &r));
  osm_collocation_result col{};
  check(osm_collocation_nearest(p.get(), cfg.alpha, cfg.reynolds, r.c, cfg.N, cfg.dN, &col));
  if (!col.found) throw Failure{2, "EigenSolveFailed", "no collocation eigenvalue confirmed at both resolutions"};
  double dc = std::hypot(r.c.re - col.c.re, r.c.im - col.c.im);
  Output o(cfg);
  if (cfg.format == "csv") {
    o.meta("validate");
    o.line("alpha,R,c_operator_re,c_operator_im,c_collocation_re,c_collocation_im,delta_c,pair_distance");
    o.line(num(cfg.alpha) + "," + num(cfg.reynolds) + "," + num(r.c.re) + "," + num(r.c.im) + "," + num(col.c.re) +
           "," + num(col.c.im) + "," + num(dc) + "," + num(col.pair_distance));
  } else {
    Json j;
    j.add("alpha", cfg.alpha).add("R", cfg.reynolds);
    j.add("c_operator_re", r.c.re).add("c_operator_im", r.c.im);
    j.add("c_collocation_re", col.c.re).add("c_collocation_im", col.c.im);
    j.add("delta_c", dc).add("pair_distance", col.pair_distance).add("self_converged", bool(col.self_converged));
    if (!cfg.no_meta) j.add("meta", meta_json(cfg, "validate"));
    o.line(j.str());
  }
  o.flush();
}

void run_airy_table(const Config& cfg) {
  std::vector<std::pair<double, double>> zs;
  if (!cfg.z_list.empty()) {
    // "re:im" pairs separated by commas.
    std::stringstream ss(cfg.z_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto c = tok.find(':');
      if (c == std::string::npos) usage_error("z-list entries are re:im");
      zs.emplace_back(parse_list(tok.substr(0, c))[0], parse_list(tok.substr(c + 1))[0]);
    }
  } else {
    const double pi = 3.14159265358979323846;
    for (double r : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0})
      for (double a : {-pi / 3, -pi / 6, 0.0, pi / 6, pi / 3}) {
        zs.emplace_back(r * std::cos(a), r * std::sin(a));
        if (r == 0.0) break;
      }
  }
  Output o(cfg);
  o.meta("airy-table");
  o.line("z_re,z_im,kind,order,value_re,value_im");
  for (auto [re, im] : zs)
    for (int kind = 0; kind < 2; ++kind)
      for (int order = -2; order <= 2; ++order) {
        osm_complex v;
        check(osm_airy_eval(kind, order, {re, im}, &v));
        o.line(num(re) + "," + num(im) + "," + (kind ? "Ci" : "Ai") + "," + std::to_string(order) + "," + num(v.re) +
               "," + num(v.im));
      }
  o.flush();
}

void run_green_slice(const Config& cfg) {
  need(cfg.alpha, "alpha");
  need(cfg.reynolds, "reynolds");
  Profile p(cfg.profile);
  osm_complex c = wave_speed(cfg, p);
  Context ctx(p, cfg.alpha, cfg.reynolds, c, cfg.num);
  osm_complex z0 = std::isnan(cfg.z0) ? osm_context_critical_point(ctx.get()) : osm_complex{cfg.z0, 0.0};
  size_t n = osm_context_size(ctx.get());
  std::vector<osm_complex> g(n);
  check(osm_context_green_slice(ctx.get(), z0, cfg.part, cfg.order, g.data(), n));
  Output o(cfg);
  o.meta("green-slice");
  o.line("x_re,x_im,g_re,g_im");
  for (size_t i = 0; i < n; ++i) {
    osm_complex x = osm_context_node(ctx.get(), i);
    o.line(num(x.re) + "," + num(x.im) + "," + num(g[i].re) + "," + num(g[i].im));
  }
  o.flush();
}

// Reads `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) usage_error("cannot read config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int ln = 0;
  while (std::getline(f, line)) {
    ++ln;
    auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) usage_error("config line " + std::to_string(ln) + " lacks '='");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void error_json(const Failure& f) {
  Json j;
  j.add("error", f.name).add("message", f.message).add("exit_code", f.exit_code);
  std::fprintf(stderr, "%s\n", j.str().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  osm_numerics_default(&cfg.num);
  CLI::App app{"Orr-Sommerfeld eigenmodes by Green-function construction, with a collocation check"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; command-line flags take precedence");
  app.add_option("--profile", cfg.profile, "poiseuille | sin | couette | \"poly: [a0, a1, ...]\"");
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", cfg.workers, "worker threads (default: logical cores)");
  app.add_flag("--no-meta", cfg.no_meta, "omit the metadata line");
  app.add_option("--series-tol", cfg.num.series_tol, "series truncation tolerance");
  app.add_option("--iter-tol", cfg.num.iter_tol, "relative residual target of the correction engine");
  app.add_option("--max-iter", cfg.num.max_iter, "correction engine iteration cap");
  app.add_option("--refine", cfg.num.mesh_refine, "panel length multiplier (smaller is finer)");
  app.add_option("--tol-dc", cfg.num.tol_dc, "eigenvalue step tolerance");
  app.add_option("--tol-residual", cfg.num.tol_residual, "relative dispersion residual tolerance");
  bool reduced = false;
  app.add_flag("--reduced", reduced, "root-find the reduced ratio relation instead of the determinant");
  std::string solver = "auto";
  app.add_option("--solver", solver, "neumann | gmres | auto")->check(CLI::IsMember({"neumann", "gmres", "auto"}));

  auto eigen = app.add_subcommand("eigen", "eigenvalue c(alpha, R)");
  auto curve = app.add_subcommand("neutral-curve", "bisected Im c = 0 crossings along alpha = A R^-beta");
  auto sweep = app.add_subcommand("sweep", "growth rates along alpha = A R^-beta");
  auto modes = app.add_subcommand("modes", "the four constructed solutions and their boundary ratios");
  auto validate = app.add_subcommand("validate", "operator method against the collocation eigensolver");
  auto airy = app.add_subcommand("airy-table", "Ai and Ci with derivatives and primitives");
  auto green = app.add_subcommand("green-slice", "Airy Green function G(x, z0) over the contour");
  for (auto* sc : {eigen, modes, validate, green}) {
    sc->add_option("--alpha", cfg.alpha, "wavenumber");
    sc->add_option("--reynolds", cfg.reynolds, "Reynolds number");
  }
  for (auto* sc : {eigen, modes, green}) {
    sc->add_option("--c-re", cfg.c_re, "wave speed, real part (seed for eigen)");
    sc->add_option("--c-im", cfg.c_im, "wave speed, imaginary part");
  }
  curve->add_option("--reynolds", cfg.reynolds_range, "R value, list, or lo:hi:logN");
  curve->add_option("--branch", cfg.branch, "lower | upper");
  curve->add_option("--a-min", cfg.a_min, "smallest A");
  curve->add_option("--a-max", cfg.a_max, "largest A");
  curve->add_option("--a-count", cfg.a_count, "log-spaced A samples");
  curve->add_option("--rel-tol", cfg.rel_tol, "relative bisection tolerance in A");
  sweep->add_option("--beta", cfg.beta_list, "beta value or comma list");
  sweep->add_option("--reynolds-list", cfg.reynolds_list, "comma list or lo:hi:logN");
  sweep->add_option("--A", cfg.A, "prefactor A");
  modes->add_option("--points", cfg.points, "output samples on [0, 1]");
  validate->add_option("--N", cfg.N, "collocation degree");
  validate->add_option("--dN", cfg.dN, "resolution increment for the convergence check");
  airy->add_option("--z-list", cfg.z_list, "comma list of re:im points");
  green->add_option("--z0", cfg.z0, "real z0 (default: the critical point)");
  green->add_option("--part", cfg.part, "0 localized, 1 non-localized, 2 full");
  green->add_option("--order", cfg.order, "z-derivative order 0..3");

  try {
    try {
      app.parse(argc, argv);
      if (!config_path.empty()) {
        // Re-parse with config entries ahead of the command line so flags win.
        auto kv = read_config(config_path);
        std::vector<std::string> args{argv[0]};
        std::vector<std::string> cmd(argv + 1, argv + argc);
        size_t sub = 0;
        while (sub < cmd.size() && !app.got_subcommand(cmd[sub])) ++sub;
        args.insert(args.end(), cmd.begin(), cmd.begin() + sub + 1);
        CLI::App* active = app.get_subcommands().front();
        for (const auto& [k, v] : kv) {
          std::string flag = "--" + k;
          bool given = false;
          for (const auto& a : cmd) given |= a == flag || a.rfind(flag + "=", 0) == 0;
          if (given) continue;
          bool sub_opt = active->get_option_no_throw(flag) != nullptr;
          if (!sub_opt && !app.get_option_no_throw(flag)) usage_error("unknown config key " + k);
          if (sub_opt) {
            cmd.insert(cmd.begin() + sub + 1, {flag, v});
          } else if (v == "true" || v == "false") {
            if (v == "true") cmd.insert(cmd.begin(), flag);
            ++sub;
          } else {
            cmd.insert(cmd.begin(), {flag, v});
            sub += 2;
          }
        }
        args.assign(1, argv[0]);
        args.insert(args.end(), cmd.begin(), cmd.end());
        cfg = Config{};
        osm_numerics_default(&cfg.num);
        reduced = false;
        solver = "auto";
        config_path.clear();
        app.clear();
        std::vector<char*> av;
        for (auto& a : args) av.push_back(a.data());
        app.parse(int(av.size()), av.data());
      }
    } catch (const CLI::ParseError& e) {
      int rc = app.exit(e);
      return rc == 0 ? 0 : 1;
    }
    cfg.num.reduced = reduced ? 1 : 0;
    cfg.num.solver = solver == "neumann" ? OSM_SOLVER_NEUMANN : solver == "gmres" ? OSM_SOLVER_GMRES : OSM_SOLVER_AUTO;
    if (!(cfg.num.series_tol > 0) || !(cfg.num.iter_tol > 0) || !(cfg.num.tol_dc > 0) || !(cfg.num.tol_residual > 0))
      usage_error("tolerances must be positive");
    if (cfg.format.empty()) cfg.format = (*eigen || *validate || *modes) ? "json" : "csv";
    if (*eigen) run_eigen(cfg);
    else if (*curve) run_neutral_curve(cfg);
    else if (*sweep) run_sweep(cfg);
    else if (*modes) run_modes(cfg);
    else if (*validate) run_validate(cfg);
    else if (*airy) run_airy_table(cfg);
    else if (*green) run_green_slice(cfg);
  } catch (const Failure& f) {
    error_json(f);
    return f.exit_code;
  }
  return 0;
}
