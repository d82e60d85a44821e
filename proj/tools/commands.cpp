#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "smalldev/entropy.hpp"
#include "smalldev/gfunction.hpp"
#include "smalldev/pathgen.hpp"
#include "smalldev/ratefit.hpp"
#include "smalldev/smallball.hpp"
#include "smalldev/tsirelson.hpp"

namespace smalldev::cli {

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

struct ModelOpts {
  std::string spectrum = "discrete";
  double nu = 1.0;
  double alpha = 2.0;
  double cutoff = 1.0;
  double weight = 1.0;
  std::optional<std::size_t> K;
  std::optional<double> tail_tol;
  std::size_t grid = 1024;
  double t_max = 1.0;
  std::size_t strata = pathgen::kDefaultStrata;

  void add_to(CLI::App* sub) {
    sub->add_option("--spectrum", spectrum, "Spectrum kind")
        ->check(CLI::IsMember({"continuous", "discrete", "bandlimited", "logpower", "truncated", "discrete-band"}));
    sub->add_option("--nu", nu, "Spectral exponent");
    sub->add_option("--alpha", alpha, "Log-power exponent");
    sub->add_option("--cutoff", cutoff, "Band cutoff (integer band for discrete-band)");
    sub->add_option("--weight", weight, "Band weight");
    sub->add_option("--K", K, "Series truncation for the discrete spectrum");
    sub->add_option("--tail-tol", tail_tol, "Admissible dropped variance");
    sub->add_option("--grid", grid, "Grid points");
    sub->add_option("--t-max", t_max, "Right end of the time grid");
    sub->add_option("--strata", strata, "Spectral strata for continuous models");
  }

  smallball::GeneratorConfig config() const {
    smallball::GeneratorConfig cfg;
    spectra::SpectralModel m;
    m.kind = spectra::parse_kind(spectrum);
    m.nu = nu;
    m.alpha = alpha;
    m.cutoff = cutoff;
    m.weight = weight;
    m.validate();
    cfg.model = m;
    cfg.K = K;
    cfg.tail_tol = tail_tol;
    cfg.grid = pathgen::GridSpec{0.0, t_max, grid};
    cfg.strata = strata;
    return cfg;
  }
};

// ---------------------------------------------------------------------------

void add_simulate(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("simulate", "Sample paths on a grid");
  auto m = std::make_shared<ModelOpts>();
  auto paths = std::make_shared<std::size_t>(1);
  auto index = std::make_shared<std::uint64_t>(0);
  m->add_to(sub);
  sub->add_option("--paths", *paths, "Number of paths")->check(CLI::PositiveNumber);
  sub->add_option("--index", *index, "Index of the first path");
  runners["simulate"] = [=](const Globals& g) {
    const auto gen = smallball::make_generator(m->config());
    Output out;
    if (g.format == "json") {
      Json j;
      j["generator"] = gen.description();
      j["method"] = std::string(pathgen::to_string(gen.method()));
      j["truncation_K"] = gen.truncation_K();
      j["embedding_size"] = gen.embedding_size();
      j["variance"] = gen.variance();
      j["t"] = Json::array();
      for (std::size_t i = 0; i < gen.grid().n_points; ++i) j["t"].push_back(gen.grid().at(i));
      j["paths"] = Json::array();
      for (std::size_t p = 0; p < *paths; ++p) {
        const auto s = gen.sample(g.seed, *index + p);
        j["paths"].push_back({{"index", *index + p},
                              {"sup", pathgen::sup_norm(s)},
                              {"l2", pathgen::l2_norm(s)},
                              {"values", s.values}});
      }
      out.json = std::move(j);
      return out;
    }
    Table t;
    t.columns = *paths == 1 ? std::vector<std::string>{"t", "x"} : std::vector<std::string>{"path", "t", "x"};
    for (std::size_t p = 0; p < *paths; ++p) {
      const auto s = gen.sample(g.seed, *index + p);
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (*paths == 1) {
          t.add({fmt(s.grid.at(i)), fmt(s.values[i])});
        } else {
          t.add({std::to_string(*index + p), fmt(s.grid.at(i)), fmt(s.values[i])});
        }
      }
    }
    out.table = std::move(t);
    return out;
  };
}

Table smallball_table() {
  Table t;
  t.columns = {"r", "norm", "n", "hits", "p_hat", "ci_low", "ci_high", "phi_hat", "phi_lo", "phi_hi", "grid", "seed"};
  return t;
}

void add_row(Table& t, const smallball::SmallBallEstimate& e) {
  t.add({fmt(e.r), std::string(smallball::to_string(e.norm)), fmt(e.n_samples), fmt(e.hits), fmt(e.p_hat),
         fmt(e.ci_low), fmt(e.ci_high), fmt(e.phi_hat), fmt(e.phi_lo), fmt(e.phi_hi), fmt(e.grid_points),
         std::to_string(e.seed)});
}

void add_smallball(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("smallball", "Monte Carlo small-ball probabilities");
  auto m = std::make_shared<ModelOpts>();
  auto norm = std::make_shared<std::string>("sup");
  auto radii = std::make_shared<std::string>();
  auto n = std::make_shared<std::size_t>(100000);
  auto refine = std::make_shared<bool>(false);
  auto rel_tol = std::make_shared<double>(0.01);
  auto levels = std::make_shared<std::size_t>(5);
  m->add_to(sub);
  sub->add_option("--norm", *norm, "sup or l2");
  sub->add_option("--r", *radii, "Radii: a,b,c or geom:a:b:n")->required();
  sub->add_option("--n", *n, "Paths");
  sub->add_flag("--refine", *refine, "Refine the grid until phi settles");
  sub->add_option("--rel-tol", *rel_tol, "Refinement tolerance");
  sub->add_option("--max-levels", *levels, "Refinement levels");
  runners["smallball"] = [=](const Globals& g) {
    const auto cfg = m->config();
    const auto nrm = smallball::parse_norm(*norm);
    const auto rs = parse_list(*radii);
    Table t = smallball_table();
    if (*refine) {
      for (double r : rs) {
        for (const auto& lvl : smallball::refine_grid(cfg, nrm, r, *n, g.seed, *rel_tol, *levels, g.threads)) {
          add_row(t, lvl.estimate);
        }
      }
    } else {
      for (const auto& e : smallball::estimate(cfg, nrm, rs, *n, g.seed, g.threads)) add_row(t, e);
    }
    return Output{std::move(t), std::nullopt};
  };
}

void add_l2_exact(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("l2-exact", "Exact L2 small-ball probabilities of the periodic process");
  auto nu = std::make_shared<double>(1.0);
  auto K = std::make_shared<std::size_t>(8);
  auto radii = std::make_shared<std::string>();
  sub->add_option("--nu", *nu, "Spectral exponent");
  sub->add_option("--K", *K, "Series truncation");
  sub->add_option("--r", *radii, "Radii")->required();
  runners["l2-exact"] = [=](const Globals&) {
    const auto spec = smallball::WeightedChiSquareSpec::periodic(*nu, *K);
    Table t;
    t.columns = {"r", "p", "log_p", "phi", "phi_over_logr2"};
    for (double r : parse_list(*radii)) {
      const double lp = smallball::log_exact_l2(spec, r);
      const double lr = std::log(r);
      t.add({fmt(r), fmt(std::exp(lp)), fmt(lp), fmt(-lp), fmt(-lp / (lr * lr))});
    }
    return Output{std::move(t), std::nullopt};
  };
}

void add_tsirelson(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("tsirelson", "Tsirelson lower bounds on phi");
  auto spectrum = std::make_shared<std::string>("discrete");
  auto nu = std::make_shared<double>(1.0);
  auto radii = std::make_shared<std::string>();
  auto convention = std::make_shared<std::string>("paper-2pi");
  auto variant = std::make_shared<std::string>("paper-exponent");
  auto l = std::make_shared<std::optional<double>>();
  auto certificate = std::make_shared<bool>(false);
  sub->add_option("--spectrum", *spectrum, "discrete or continuous");
  sub->add_option("--nu", *nu, "Spectral exponent");
  sub->add_option("--r", *radii, "Radii")->required();
  sub->add_option("--convention", *convention, "paper-2pi or period-1");
  sub->add_option("--variant", *variant, "paper-exponent, gaussian-factor or rigorous-grid-count");
  sub->add_option("--l", *l, "Fixed band parameter instead of the optimum");
  sub->add_flag("--certificate", *certificate, "Check the grid decorrelation at l_used");
  runners["tsirelson"] = [=](const Globals&) {
    const auto sp = tsirelson::parse_spectrum(*spectrum);
    const auto conv = tsirelson::parse_convention(*convention);
    const auto var = tsirelson::parse_variant(*variant);
    Table t;
    t.columns = {"nu", "spectrum", "convention", "variant", "r", "l_used", "sigma2", "phi_lower", "valid"};
    if (*certificate) t.columns.push_back("cert_max_ratio");
    for (double r : parse_list(*radii)) {
      tsirelson::LowerBoundResult b;
      if (*l) {
        b = tsirelson::bound_at(tsirelson::TsirelsonConfig{*nu, sp, **l, conv}, r, var);
      } else {
        b = tsirelson::bound_opt(*nu, sp, r, conv, var);
      }
      std::vector<std::string> row{fmt(*nu), *spectrum, *convention, *variant, fmt(r), fmt(b.l_used),
                                   fmt(b.sigma2), fmt(b.phi_lower), b.valid ? "true" : "false"};
      if (*certificate) {
        row.push_back(fmt(tsirelson::uncorrelated_certificate(b.config).max_ratio));
      }
      t.add(std::move(row));
    }
    return Output{std::move(t), std::nullopt};
  };
}

void add_entropy(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("entropy", "Metric entropy bracket of the periodic RKHS ball");
  auto nu = std::make_shared<double>(1.0);
  auto K = std::make_shared<std::size_t>(40);
  auto eps = std::make_shared<std::string>();
  sub->add_option("--nu", *nu, "Spectral exponent");
  sub->add_option("--K", *K, "Coefficients kept explicitly");
  sub->add_option("--eps", *eps, "Radii epsilon")->required();
  runners["entropy"] = [=](const Globals&) {
    const auto e = entropy::CoefficientEllipsoid::periodic(*nu, *K);
    const auto es = parse_list(*eps);
    return Output{to_table(entropy::entropy_curve(e, es)), std::nullopt};
  };
}

double lookup(const BoundCurve& c, double x, bool upper) {
  for (const auto& p : c.points) {
    if (std::abs(p.x - x) <= 1e-9 * std::abs(x)) {
      const double v = upper ? p.upper : p.lower;
      if (!std::isnan(v)) return v;
      return upper ? p.lower : p.upper;
    }
  }
  return kInf;
}

void add_kl_translate(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("kl-translate", "Translate between small-ball and entropy bounds");
  auto direction = std::make_shared<std::string>("phi-to-H");
  auto input = std::make_shared<std::string>();
  auto lambda = std::make_shared<double>(2.0);
  auto values = std::make_shared<std::string>();
  sub->add_option("--direction", *direction, "phi-to-H, phi-to-H-lower, H-to-phi or alpha")
      ->check(CLI::IsMember({"phi-to-H", "phi-to-H-lower", "H-to-phi", "alpha"}));
  sub->add_option("--input", *input, "Curve CSV");
  sub->add_option("--lambda", *lambda, "Shift parameter");
  sub->add_option("--values", *values, "phi values (alpha) or radii (H-to-phi)");
  runners["kl-translate"] = [=](const Globals&) {
    if (*direction == "alpha") {
      if (values->empty()) throw UsageError("--values is required for --direction alpha");
      Table t;
      t.columns = {"phi", "alpha_r", "roundtrip_error"};
      for (double phi : parse_list(*values)) {
        const double a = entropy::alpha_r(phi);
        const double back = std::isfinite(a) ? -std::log(0.5 * std::erfc(-a / std::sqrt(2.0))) : 0.0;
        t.add({fmt(phi), fmt(a), fmt(std::abs(back - phi))});
      }
      return Output{std::move(t), std::nullopt};
    }
    if (input->empty()) throw UsageError("--input is required for --direction " + *direction);
    const BoundCurve c = read_curve(*input);
    if (*direction == "phi-to-H") return Output{to_table(entropy::kl_phi_to_H(c, *lambda)), std::nullopt};
    if (*direction == "phi-to-H-lower") {
      std::vector<double> rs;
      for (const auto& p : c.points) rs.push_back(p.x);
      // log Phi(lambda + alpha_r) falls as phi(r) grows, so the r side takes the upper bound.
      const auto at = [&c](double r) {
        const double up = lookup(c, r, true);
        return std::isfinite(up) ? up : lookup(c, r, false);
      };
      BoundCurve h;
      h.abscissa = "epsilon";
      h.quantity = "H";
      h.params = "lambda=" + fmt(*lambda);
      for (double r : rs) {
        const double p1 = at(r);
        const double p2 = lookup(c, 2.0 * r, false);
        if (!std::isfinite(p1) || !std::isfinite(p2)) continue;
        h.add(r / *lambda, entropy::kl_H_lower_exact(p2, p1, *lambda), kNaN, "kl-H-lower");
      }
      return Output{to_table(h), std::nullopt};
    }
    // H-to-phi: H is nonincreasing, so the value at the nearest tabulated eps below bounds it.
    if (values->empty()) throw UsageError("--values (radii) is required for --direction H-to-phi");
    auto pts = c.points;
    std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.x < b.x; });
    const auto H = [&pts](double eps) {
      double v = kInf;
      for (const auto& p : pts) {
        if (p.x > eps) break;
        if (!std::isnan(p.upper)) v = p.upper;
      }
      return v;
    };
    BoundCurve out;
    out.abscissa = "r";
    out.quantity = "phi";
    out.params = c.params;
    for (double r : parse_list(*values)) {
      out.add(r, kNaN, entropy::phi_upper_from_entropy(H, r), "kl-phi-upper");
    }
    return Output{to_table(out), std::nullopt};
  };
}

void add_g_certify(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("g-certify", "Certify the infinite sinc product G");
  auto gamma = std::make_shared<double>(0.5);
  auto t_max = std::make_shared<double>(1e4);
  auto grid = std::make_shared<std::size_t>(2001);
  auto t0 = std::make_shared<double>(10.0);
  sub->add_option("--gamma", *gamma, "Decay exponent of the factors");
  sub->add_option("--t-max", *t_max, "Right end of the decay range");
  sub->add_option("--grid", *grid, "Grid points on [0, 1]");
  sub->add_option("--t0", *t0, "Left end of the decay range");
  runners["g-certify"] = [=](const Globals&) {
    const auto spec = entropy::GFunctionSpec::make(*gamma);
    const auto c = entropy::g_certify(spec, *t_max, *grid, *t0);
    Json j;
    j["gamma"] = *gamma;
    j["c"] = spec.c;
    j["theta_grid_min"] = c.theta_grid_min;
    j["lipschitz"] = c.lipschitz;
    j["theta_G"] = c.theta_G;
    j["theta_positive"] = c.theta_positive;
    j["max_abs_real"] = c.max_abs_real;
    j["bounded_by_one"] = c.bounded_by_one;
    j["bounded_by_exp"] = c.bounded_by_exp;
    j["decay_exponent"] = c.decay_exponent;
    j["decay_target"] = 1.0 / (1.0 + *gamma);
    j["C_G_fit"] = c.C_G_fit;
    j["C_G"] = c.C_G;
    j["C_G_envelope"] = c.C_G_envelope;
    j["decay_exponent_envelope"] = c.decay_exponent_envelope;
    j["maxima_t"] = c.maxima_t;
    j["maxima_log_abs"] = c.maxima_log_abs;
    return Output{std::nullopt, std::move(j)};
  };
}

void add_scaling(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("scaling", "Entropy of the rescaled process X(t/c)");
  auto c = std::make_shared<double>(0.5);
  auto input = std::make_shared<std::string>();
  auto nu = std::make_shared<double>(1.0);
  auto K = std::make_shared<std::size_t>(40);
  auto eps = std::make_shared<std::string>();
  sub->add_option("--c", *c, "Rescaling constant in (0, 1]");
  sub->add_option("--input", *input, "H curve CSV; otherwise computed from --nu/--K/--eps");
  sub->add_option("--nu", *nu, "Spectral exponent");
  sub->add_option("--K", *K, "Coefficients kept explicitly");
  sub->add_option("--eps", *eps, "Radii epsilon");
  runners["scaling"] = [=](const Globals&) {
    BoundCurve h;
    if (!input->empty()) {
      h = read_curve(*input);
    } else {
      if (eps->empty()) throw UsageError("scaling needs --input or --eps");
      const auto e = entropy::CoefficientEllipsoid::periodic(*nu, *K);
      const auto es = parse_list(*eps);
      h = entropy::entropy_curve(e, es);
    }
    return Output{to_table(entropy::scaling_patch(h, *c)), std::nullopt};
  };
}

void add_fit(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("fit", "Fit phi = A |log r|^gamma (log|log r|)^beta");
  auto input = std::make_shared<std::string>();
  auto column = std::make_shared<std::string>("lower");
  auto beta = std::make_shared<std::optional<double>>();
  auto r_min = std::make_shared<double>(0.0);
  auto r_max = std::make_shared<double>(1.0);
  sub->add_option("--input", *input, "Curve CSV")->required();
  sub->add_option("--column", *column, "lower or upper")->check(CLI::IsMember({"lower", "upper"}));
  sub->add_option("--beta", *beta, "Hold beta fixed");
  sub->add_option("--r-min", *r_min, "Smallest radius used");
  sub->add_option("--r-max", *r_max, "Largest radius used");
  runners["fit"] = [=](const Globals&) {
    std::vector<ratefit::RatePoint> pts;
    std::string regime = "deterministic";
    const CsvData d = read_csv(*input);
    if (const long ih = d.column("phi_hat"); ih >= 0) {
      // Monte Carlo table: phi_hat where its interval is tight.
      regime = "qualitative";
      const long ir = d.column("r");
      const long lo = d.column("phi_lo");
      const long hi = d.column("phi_hi");
      if (ir < 0 || lo < 0 || hi < 0) throw UsageError("Monte Carlo table needs r, phi_lo and phi_hi");
      for (std::size_t i = 0; i < d.rows.size(); ++i) {
        const double r = d.number(i, ir);
        const double v = d.number(i, ih);
        if (r < *r_min || r > *r_max || !std::isfinite(v) || !(v > 0.0)) continue;
        if ((d.number(i, hi) - d.number(i, lo)) / v >= 0.1) continue;
        pts.push_back({r, v});
      }
    } else {
      for (const auto& p : read_curve(*input).points) {
        const double v = *column == "upper" ? p.upper : p.lower;
        if (p.x < *r_min || p.x > *r_max || !std::isfinite(v)) continue;
        pts.push_back({p.x, v});
      }
    }
    const auto f = ratefit::fit(pts, *beta);
    Json j;
    j["mode"] = f.mode;
    j["regime"] = regime;
    j["refused"] = f.refused;
    if (f.refused) {
      j["reason"] = f.reason;
    } else {
      j["A"] = f.A;
      j["gamma"] = f.gamma;
      j["beta"] = f.beta;
      j["rss"] = f.rss;
    }
    j["n_points"] = f.n_points;
    j["r_min"] = f.r_min;
    j["r_max"] = f.r_max;
    return Output{std::nullopt, std::move(j)};
  };
}

void add_problem5(CLI::App& app, std::map<std::string, Runner>& runners) {
  auto* sub = app.add_subcommand("problem5", "Reference curves for the log-power spectrum");
  auto alpha = std::make_shared<double>(2.0);
  auto radii = std::make_shared<std::string>();
  sub->add_option("--alpha", *alpha, "Log-power exponent");
  sub->add_option("--r", *radii, "Radii")->required();
  runners["problem5"] = [=](const Globals&) {
    const auto rs = parse_list(*radii);
    return Output{to_table(ratefit::open_problem_curves(*alpha, rs)), std::nullopt};
  };
}

}  // namespace

void register_commands(CLI::App& app, std::map<std::string, Runner>& runners) {
  add_simulate(app, runners);
  add_smallball(app, runners);
  add_l2_exact(app, runners);
  add_tsirelson(app, runners);
  add_entropy(app, runners);
  add_kl_translate(app, runners);
  add_g_certify(app, runners);
  add_scaling(app, runners);
  add_fit(app, runners);
  add_problem5(app, runners);
}

}  // namespace smalldev::cli
