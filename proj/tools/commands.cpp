#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "softdeco/experiment.hpp"

namespace softdeco::app {

namespace {

using json = nlohmann::json;

json estimate_json(const QuadratureEstimate& e) {
  return {{"value", e.value}, {"error", e.error}, {"converged", e.converged}};
}

// NaN-safe relative deviation; null when the reference is zero.
json deviation(double got, double want) {
  if (want == 0.0) return got == 0.0 ? json(0.0) : json(nullptr);
  return std::abs(got - want) / std::abs(want);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json summary_json(const WhichPathSummary& s) {
  return {{"gamma", s.gamma},
          {"overlap", s.overlap},
          {"D", s.distinguishability},
          {"V_max", s.visibility_bound},
          {"L_max", s.guess_bound},
          {"linearized", {{"D", s.linear_distinguishability},
                          {"V_max", s.linear_visibility_bound},
                          {"valid", s.linear_valid}}}};
}

struct Row {
  double value = 0.0;
  std::optional<double> gamma[4];
  double closed[3] = {0, 0, 0};
  double D = 0, V = 0, err = 0;
  std::string status = "ok";
};

Row sweep_row(const RunConfig& base, const std::string& key, double value) {
  Row row;
  row.value = value;
  Evaluation ev;
  try {
    const RunConfig cfg = with_parameter(base, key, value);
    validate(cfg);
    require_interferometer(cfg);
    ev = evaluate(cfg);
  } catch (const ConfigError&) {
    row.status = "invalid";
    return row;
  } catch (const InfraredDivergenceError&) {
    row.status = "ir_divergent";
    return row;
  } catch (const std::exception&) {
    row.status = "error";
    return row;
  }

  const auto& rep = ev.report;
  bool finite = true;
  auto take = [&](double x) {
    finite = finite && std::isfinite(x);
    return x;
  };
  const Variant order[4] = {Variant::full, Variant::dressed, Variant::sub, Variant::hard};
  for (int i = 0; i < 4; ++i) {
    if (const auto& e = rep.get(order[i])) {
      row.gamma[i] = take(e->value);
      row.err = std::max(row.err, take(e->error));
    }
  }
  row.closed[0] = take(rep.closed.dressed);
  row.closed[1] = take(rep.closed.sub);
  row.closed[2] = take(rep.closed.hard);
  row.D = take(ev.summary.distinguishability);
  row.V = take(ev.summary.visibility_bound);
  if (!finite) {
    Row bad;
    bad.value = value;
    bad.status = "non_finite";
    return bad;
  }
  if (!rep.converged()) row.status = "not_converged";
  return row;
}

void write_row(std::ostream& out, const std::string& key, const Row& r) {
  const bool ok = r.status == "ok" || r.status == "not_converged";
  out << key << ',' << format_number(r.value);
  for (const auto& g : r.gamma) out << ',' << (ok && g ? format_number(*g) : "");
  for (double c : r.closed) out << ',' << (ok ? format_number(c) : "");
  out << ',' << (ok ? format_number(r.D) : "") << ',' << (ok ? format_number(r.V) : "") << ','
      << (ok ? format_number(r.err) : "") << ',' << r.status << '\n';
}

}  // namespace

const char* const kSweepHeader =
    "sweep_param,value,gamma_full,gamma_dressed,gamma_sub,gamma_hard,closed_dressed,closed_sub,closed_hard,D,V_max,"
    "err_est,status";

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

Evaluation evaluate(const RunConfig& cfg) {
  Evaluation ev;
  const auto g = cfg.geometry();
  ev.report = compute_report(g, cfg.cutoffs, cfg.quadrature, cfg.variants);
  for (Variant v : {Variant::dressed, Variant::hard, Variant::sub, Variant::full}) {
    if (const auto& e = ev.report.get(v)) {
      ev.summary_variant = v;
      ev.summary = summarize(std::max(0.0, e->value));
      break;
    }
  }
  return ev;
}

int cmd_gamma(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    require_interferometer(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const Evaluation ev = evaluate(cfg);
  const auto& rep = ev.report;
  const auto& cf = rep.closed;
  const auto g = cfg.geometry();

  json doc;
  doc["parameters"] = {{"l", g.l},
                       {"tau", g.tau},
                       {"v", g.v},
                       {"charge", g.charge},
                       {"lambda_ir", cfg.cutoffs.lambda_ir},
                       {"omega_uv", cfg.cutoffs.omega_uv},
                       {"beta", optional_number(cfg.cutoffs.beta)}};
  doc["angular"] = estimate_json(rep.angular);
  doc["angular"]["exact"] = cf.angular_exact;
  doc["angular"]["small_v"] = cf.angular_small_v;

  json vars = json::object();
  for (Variant v : cfg.variants) {
    const auto& e = rep.get(v);
    json j = estimate_json(*e);
    std::optional<double> closed;
    switch (v) {
      case Variant::full: closed = cf.full; break;
      case Variant::dressed: closed = cf.dressed; break;
      case Variant::sub: closed = cf.sub; break;
      case Variant::hard: closed = cf.hard; break;
    }
    j["closed_form"] = optional_number(closed);
    j["closed_form_rel_dev"] = closed ? deviation(e->value, *closed) : json(nullptr);
    vars[std::string(variant_name(v))] = j;
  }
  doc["variants"] = vars;

  doc["closed_forms"] = {{"zero_temperature", true},
                         {"v12", cf.v12},
                         {"freq_dressed", cf.freq_dressed},
                         {"freq_sub", cf.freq_sub},
                         {"freq_hard", cf.freq_hard},
                         {"freq_full", optional_number(cf.freq_full)},
                         {"dressed", cf.dressed},
                         {"sub", cf.sub},
                         {"hard", cf.hard},
                         {"full", optional_number(cf.full)},
                         {"dressed_asymptotic", cf.dressed_asymptotic},
                         {"sub_asymptotic", cf.sub_asymptotic},
                         {"hard_two_e2_coefficient", cf.hard_two_e2},
                         {"hard_one_e2_coefficient", cf.hard_one_e2},
                         {"divergence_coefficient", cf.divergence_coefficient}};
  if (rep.hard && cf.hard_two_e2 > 0.0) {
    doc["hard_sector"] = {{"numeric_over_two_e2_coefficient", rep.hard->value / cf.hard_two_e2},
                          {"numeric_over_one_e2_coefficient", rep.hard->value / cf.hard_one_e2}};
  }
  if (ev.summary_variant) {
    doc["which_path"] = summary_json(ev.summary);
    doc["which_path"]["from_variant"] = std::string(variant_name(*ev.summary_variant));
  }
  doc["converged"] = rep.converged();
  out << doc.dump(2) << '\n';

  if (!rep.converged()) {
    err << "quadrature did not converge to rel_tol " << cfg.quadrature.rel_tol << '\n';
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, int threads, std::ostream& out, std::ostream& err) {
  if (!cfg.sweep) {
    err << "config error: " << cfg.source << ": key 'sweep': missing required block\n";
    return kExitConfig;
  }
  const auto& sw = *cfg.sweep;
  const auto values = sw.values();
  std::vector<Row> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < values.size();) rows[k] = sweep_row(cfg, sw.parameter, values[k]);
  };
  const int t = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(values.size(), 1))));
  std::vector<std::thread> pool;
  for (int i = 1; i < t; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  out << kSweepHeader << '\n';
  int code = kExitOk;
  for (const auto& r : rows) {
    write_row(out, sw.parameter, r);
    if (r.status == "invalid" || r.status == "ir_divergent")
      code = kExitConfig;
    else if (r.status != "ok" && code == kExitOk)
      code = kExitNotConverged;
  }
  if (code != kExitOk) err << "some sweep rows did not finish with status ok\n";
  return code;
}

int cmd_check(const checks::CheckOptions& opt, int threads, std::ostream& out) {
  const auto results = checks::run_all(opt, threads);
  int failed = 0;
  for (const auto& r : results) {
    char head[96];
    std::snprintf(head, sizeof head, "%-4s %2d %-30s ", r.passed ? "PASS" : "FAIL", r.number, r.id.c_str());
    out << head << r.detail << '\n';
    failed += !r.passed;
  }
  out << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_estimate_slit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.slit) {
    err << "config error: " << cfg.source << ": key 'slit': missing required block\n";
    return kExitConfig;
  }
  const auto& sb = *cfg.slit;
  const auto& s = sb.geometry;
  json doc;
  const double dressed = gamma_dressed_2slit(s);
  doc["gamma_dressed_2slit"] = dressed;
  const auto h = gamma_hard_2slit(s);
  doc["gamma_hard_2slit"] = {{"bare", h.bare},
                             {"with_velocity_factor", h.with_velocity},
                             {"with_velocity_factor_half_coefficient", h.half_coefficient},
                             {"bare_over_with_velocity_factor", h.bare_over_with_velocity},
                             {"bare_over_half_coefficient", h.bare_over_half_coefficient},
                             {"note", "bare form has no (v/c)^2 factor"}};
  if (sb.ell_o) {
    doc["acceleration"] = {{"z_f", sb.z_f},
                           {"ell_o", *sb.ell_o},
                           {"path_A", slit_acceleration(s, sb.z_f, SlitPath::A, *sb.ell_o)},
                           {"path_B", slit_acceleration(s, sb.z_f, SlitPath::B, *sb.ell_o)}};
  }

  // the same estimate through the full dressed functional
  const auto m = slit_mapping(s);
  const auto num = gamma_dressed(m.geometry, m.cutoffs, cfg.quadrature);
  doc["dressed_functional"] = {{"omega_tau", m.cutoffs.omega_uv},
                               {"value", num.value},
                               {"error", num.error},
                               {"converged", num.converged},
                               {"estimate_over_functional", num.value > 0 ? json(dressed / num.value) : json(nullptr)}};

  if (cfg.mirror) {
    const auto& mb = *cfg.mirror;
    json mj;
    for (auto [name, regime] : {std::pair{"vdw_far", VdwRegime::far}, std::pair{"vdw_near", VdwRegime::near}}) {
      const auto r = vdw_potential(mb.mirror, regime);
      mj[name] = {{"value", r.value}, {"regime_ok", r.regime_ok}};
      if (!r.regime_ok) {
        mj[name]["warning"] = r.warning;
        err << "warning: " << r.warning << '\n';
      }
    }
    mj["surface_coupling"] = surface_coupling(mb.mirror);
    if (mb.q_scatter) mj["rayleigh_rate"] = rayleigh_rate(mb.mirror, *mb.q_scatter);
    doc["mirror"] = mj;
  }
  out << doc.dump(2) << '\n';
  if (!num.converged) {
    err << "quadrature did not converge to rel_tol " << cfg.quadrature.rel_tol << '\n';
    return kExitNotConverged;
  }
  return kExitOk;
}

}  // namespace softdeco::app
