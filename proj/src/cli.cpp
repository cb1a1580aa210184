#include "curvemates/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "curvemates/analysis.hpp"
#include "curvemates/errors.hpp"
#include "curvemates/integrator.hpp"
#include "curvemates/mates.hpp"
#include "curvemates/profile.hpp"

namespace curvemates {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string group = "r3";
  std::string kappa;
  std::string tau;
  std::optional<Domain> domain;
  double step = 1e-3;
  std::string out;
  std::string trace;
  std::string mode = "analytic";
  std::string kind = "natural";
  std::vector<std::string> theorems;
  std::string path = "analytic";
  std::vector<double> initial_frame;
  std::vector<double> initial_position;
  ToleranceSet tols;
};

Domain parse_domain(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("domain must be written a:b, got '" + text + "'");
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    const double lo = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    const double hi = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    return Domain{lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("domain must be written a:b with numeric bounds, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> numbers_of(const Json& j, const char* key) {
  if (!j.is_array()) throw UsageError(std::string("config key '") + key + "' must be an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(x.get<double>());
  return v;
}

void apply_config_file(const std::string& file, RunConfig& c) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read config file '" + file + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("config file '" + file + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "group") c.group = v.get<std::string>();
      else if (key == "kappa") c.kappa = v.get<std::string>();
      else if (key == "tau") c.tau = v.get<std::string>();
      else if (key == "domain") {
        if (v.is_string()) c.domain = parse_domain(v.get<std::string>());
        else {
          const auto d = numbers_of(v, "domain");
          if (d.size() != 2) throw UsageError("config key 'domain' needs two numbers");
          c.domain = Domain{d[0], d[1]};
        }
      } else if (key == "step") c.step = v.get<double>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "trace") c.trace = v.get<std::string>();
      else if (key == "mode") c.mode = v.get<std::string>();
      else if (key == "kind") c.kind = v.get<std::string>();
      else if (key == "path") c.path = v.get<std::string>();
      else if (key == "theorems") c.theorems = v.is_string() ? split_list(v.get<std::string>()) : v.get<std::vector<std::string>>();
      else if (key == "initial_frame") c.initial_frame = numbers_of(v, "initial_frame");
      else if (key == "initial_position") c.initial_position = numbers_of(v, "initial_position");
      else if (key == "tolerances") {
        for (const auto& [name, value] : v.items())
          if (!c.tols.set(name, value.get<double>())) throw UsageError("unknown tolerance '" + name + "'");
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const Json::type_error& e) {
    throw UsageError(std::string("config file has a value of the wrong type: ") + e.what());
  }
}

void validate(const RunConfig& c) {
  GroupSpec::from_name(c.group);
  if (c.kappa.empty() || c.tau.empty()) throw UsageError("both --kappa and --tau are required");
  if (!c.domain) throw UsageError("--domain a:b is required");
  if (!(c.domain->lo < c.domain->hi)) throw UsageError("domain must satisfy s_min < s_max");
  if (!(c.step > 0.0)) throw UsageError("step must be positive");
  if (c.step > c.domain->length() / 8.0) throw UsageError("step must not exceed (s_max - s_min)/8");
  if (!c.initial_frame.empty() && c.initial_frame.size() != 9)
    throw UsageError("initial frame needs 9 numbers (T, N, B rows)");
}

Frame<double> initial_frame(const RunConfig& c) {
  if (c.initial_frame.empty()) return Frame<double>::identity();
  const auto& f = c.initial_frame;
  Frame<double> fr{Eigen::Vector3d(f[0], f[1], f[2]), Eigen::Vector3d(f[3], f[4], f[5]),
                   Eigen::Vector3d(f[6], f[7], f[8])};
  if (fr.orthonormality_defect() > 1e-6) throw UsageError("initial frame is not orthonormal");
  return fr;
}

GroupElement<double> initial_position(const RunConfig& c, const GroupSpec& spec) {
  if (c.initial_position.empty()) return GroupElement<double>::identity(spec.family);
  Eigen::VectorXd x(static_cast<Eigen::Index>(c.initial_position.size()));
  for (std::size_t i = 0; i < c.initial_position.size(); ++i) x(static_cast<Eigen::Index>(i)) = c.initial_position[i];
  try {
    auto g = GroupElement<double>::from_ambient(spec.family, x);
    if (g.manifold_defect() > 1e-6) throw UsageError("initial position is not on the group");
    return g;
  } catch (const std::invalid_argument&) {
    throw UsageError("initial position has the wrong number of coordinates for group " + spec.name());
  }
}

std::string num(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

Json jnum(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
Json jnum(const std::optional<double>& x) { return x ? jnum(*x) : Json(nullptr); }

std::vector<std::string> position_columns(GroupFamily f) {
  switch (f) {
    case GroupFamily::CommutativeR3:
      return {"x", "y", "z"};
    case GroupFamily::S3:
      return {"qw", "qx", "qy", "qz"};
    case GroupFamily::SO3:
      return {"r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33"};
  }
  return {};
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

void append_position(std::vector<std::string>& row, const GroupElement<double>& g) {
  const Eigen::VectorXd x = g.ambient();
  for (Eigen::Index i = 0; i < x.size(); ++i) row.push_back(num(x(i)));
}

Json header_json(const char* command, const RunConfig& c, const CurvatureProfile& p) {
  Json j;
  j["schema_version"] = "1";
  j["command"] = command;
  j["group"] = c.group;
  j["kappa"] = c.kappa;
  j["tau"] = c.tau;
  j["domain"] = Json::array({p.domain().lo, p.domain().hi});
  j["step"] = c.step;
  return j;
}

/// Output sink: --out file (removed again on failure) or the given stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), stream_(&fallback) {
    if (!path_.empty()) {
      file_.open(path_, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file '" + path_ + "'");
      stream_ = &file_;
    }
  }
  ~Sink() {
    if (!path_.empty() && !committed_) {
      file_.close();
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }
  std::ostream& stream() { return *stream_; }
  void commit() {
    stream_->flush();
    committed_ = true;
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_;
  bool committed_ = false;
};

int cmd_synthesize(const RunConfig& c, const CurvatureProfile& p, const GroupSpec& spec, std::ostream& out) {
  Sink sink(c.out, out);
  require_frenet(p);
  auto traj = integrate_frame<double>(p, spec, p.domain().lo, p.domain().hi, c.step, initial_frame(c));
  reconstruct_position(traj, initial_position(c, spec));
  std::ostringstream os;
  std::vector<std::string> header{"s"};
  for (const auto& n : position_columns(spec.family)) header.push_back(n);
  for (const char* n : {"t1", "t2", "t3", "n1", "n2", "n3", "b1", "b2", "b3", "kappa", "tau", "H", "sigma", "omega"})
    header.emplace_back(n);
  write_row(os, header);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double s = traj.s(i);
    const ApparatusSample a = apparatus(p, spec, s);
    std::vector<std::string> row{num(s)};
    append_position(row, traj.positions[i]);
    const Frame<double>& f = traj.frames[i];
    for (const auto* v : {&f.t, &f.n, &f.b})
      for (int k = 0; k < 3; ++k) row.push_back(num((*v)(k)));
    row.push_back(num(a.kappa));
    row.push_back(num(a.tau));
    row.push_back(num(a.harmonic));
    row.push_back(num(a.sigma));
    row.push_back(num(a.omega));
    write_row(os, row);
  }
  sink.stream() << os.str();
  sink.commit();
  return kExitOk;
}

int cmd_mate(const RunConfig& c, const CurvatureProfile& p, const GroupSpec& spec, std::ostream& out) {
  if (c.mode != "analytic" && c.mode != "geometric" && c.mode != "both")
    throw UsageError("--mode must be analytic, geometric or both");
  if (c.kind != "natural" && c.kind != "conjugate") throw UsageError("--kind must be natural or conjugate");
  if (c.mode == "both" && c.out.empty()) throw UsageError("--mode both needs --out for the CSV (summary goes to stdout)");
  const bool conj = c.kind == "conjugate";
  Sink sink(c.out, out);
  const MateApparatus m = conj ? conjugate_mate_apparatus(p, spec) : natural_mate_apparatus(p, spec);
  const bool analytic = c.mode != "geometric", geometric = c.mode != "analytic";

  std::optional<FrameTrajectory<double>> traj;
  std::vector<GroupElement<double>> curve;
  std::optional<EstimatedApparatus<double>> est;
  if (geometric) {
    traj = integrate_frame<double>(p, spec, p.domain().lo, p.domain().hi, c.step, initial_frame(c));
    reconstruct_position(*traj, initial_position(c, spec));
    curve = integrate_direction_curve(*traj, conj ? DirectionField::Binormal : DirectionField::PrincipalNormal,
                                      initial_position(c, spec));
    try {
      est = estimate_apparatus(curve, traj->s0, traj->h, spec);
    } catch (const FrenetViolation& e) {
      throw NotAFrenetMate(std::string("mate curve is not a Frenet curve: ") + e.what(), m.zero_crossings);
    }
  }

  std::vector<std::string> header{"s"};
  if (geometric)
    for (const auto& n : position_columns(spec.family)) header.push_back(n);
  if (analytic)
    for (const char* n : {"kappa", "tau", "H", "sigma", "omega"}) header.emplace_back(n);
  if (geometric)
    for (const char* n : {"kappa_est", "tau_est", "tau_g_est"}) header.emplace_back(n);

  std::ostringstream os;
  write_row(os, header);
  const UniformGrid g = UniformGrid::over(p.domain(), c.step);
  const double tg = spec.lie_torsion();
  double dk = 0.0, dt = 0.0;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < g.count; ++i) {
    const double s = g.at(i);
    std::vector<std::string> row{num(s)};
    if (geometric) append_position(row, curve[i]);
    double k = 0.0, t = 0.0;
    if (analytic) {
      k = m.profile.kappa().value(s);
      t = m.profile.tau().value(s);
      std::optional<double> h, sig;
      if (!conj || m.segment_at(s)) {
        const MateHarmonicSample hs = mate_harmonic_data(m, s);
        h = hs.harmonic;
        sig = hs.sigma;
      }
      row.push_back(num(k));
      row.push_back(num(t));
      row.push_back(num(h));
      row.push_back(num(sig));
      row.push_back(num(std::hypot(k, t - tg)));
    }
    if (geometric) {
      const bool ok = est->valid[i];
      row.push_back(ok ? num(est->kappa[i]) : "");
      row.push_back(ok ? num(est->tau[i]) : "");
      row.push_back(ok ? num(est->tau_g[i]) : "");
      const bool near_zero = conj && std::abs(traj->delta[i]) < 1e-3;
      if (analytic && ok && !near_zero) {
        dk = std::max(dk, std::abs(est->kappa[i] - k));
        dt = std::max(dt, std::abs(est->tau[i] - t));
        ++compared;
      }
    }
    write_row(os, row);
  }
  sink.stream() << os.str();
  sink.commit();
  if (c.mode == "both") {
    Json j = header_json("mate", c, p);
    j["kind"] = c.kind;
    j["samples_compared"] = compared;
    j["max_abs_kappa_diff"] = jnum(dk);
    j["max_abs_tau_diff"] = jnum(dt);
    out << j.dump(2) << '\n';
  }
  return kExitOk;
}

Json verdict_json(const Verdict& v) {
  Json j;
  j["pass"] = v.pass;
  j["residual"] = jnum(v.residual);
  j["tolerance"] = v.tolerance;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

int cmd_classify(const RunConfig& c, const CurvatureProfile& p, const GroupSpec& spec, std::ostream& out) {
  Sink sink(c.out, out);
  const ClassificationReport r = classify(p, spec, c.tols);
  Json j = header_json("classify", c, p);
  Json tol;
  for (const auto& [n, v] : c.tols.entries()) tol[n] = v;
  j["tolerances"] = tol;
  Json verdicts = Json::object();
  for (const auto& [n, v] : r.verdicts) verdicts[n] = verdict_json(v);
  j["verdicts"] = verdicts;
  Json sph;
  sph["pass"] = r.spherical.is_spherical;
  sph["case"] = r.spherical.case_name;
  sph["radius"] = jnum(r.spherical.radius);
  sph["radius_spread"] = jnum(r.spherical.radius_spread);
  sph["curvature_residual"] = jnum(r.spherical.curvature_residual);
  j["spherical"] = sph;
  Json segs = Json::array();
  for (const auto& s : r.segments) segs.push_back(Json{{"lo", s.domain.lo}, {"hi", s.domain.hi}, {"sign", s.sign}});
  j["segments"] = segs;
  sink.stream() << j.dump(2) << '\n';
  sink.commit();
  return kExitOk;
}

int cmd_verify(const RunConfig& c, const CurvatureProfile& p, const GroupSpec& spec, std::ostream& out) {
  std::vector<std::string> ids = c.theorems;
  if (ids.empty() || (ids.size() == 1 && ids[0] == "all")) ids = theorem_ids();
  for (const auto& id : ids)
    if (std::find(theorem_ids().begin(), theorem_ids().end(), id) == theorem_ids().end())
      throw UsageError("unknown theorem id '" + id + "'");
  if (c.path != "analytic" && c.path != "estimated") throw UsageError("--path must be analytic or estimated");
  const VerificationPath vp = c.path == "estimated" ? VerificationPath::Estimated : VerificationPath::Analytic;

  Sink sink(c.out, out);
  std::optional<Sink> trace;
  if (!c.trace.empty()) trace.emplace(c.trace, out);
  Json j = header_json("verify", c, p);
  j["path"] = c.path;
  Json reports = Json::array();
  bool all_ok = true;
  std::ostringstream trace_csv;
  write_row(trace_csv, {"theorem", "s", "residual"});
  for (const auto& id : ids) {
    const VerificationReport r = verify(id, p, spec, c.tols, vp, c.step);
    all_ok = all_ok && r.ok();
    Json e;
    e["theorem"] = r.theorem;
    e["status"] = std::string(to_string(r.status));
    e["hypothesis"] = r.hypothesis;
    if (!r.hypothesis_note.empty()) e["hypothesis_note"] = r.hypothesis_note;
    e["residual"] = jnum(r.residual);
    e["tolerance"] = jnum(r.tolerance);
    Json d = Json::object();
    for (const auto& [n, v] : r.details) d[n] = jnum(v);
    e["details"] = d;
    reports.push_back(e);
    for (std::size_t i = 0; i < r.trace.size(); ++i) write_row(trace_csv, {id, num(r.trace_s[i]), num(r.trace[i])});
  }
  j["reports"] = reports;
  j["all_ok"] = all_ok;
  sink.stream() << j.dump(2) << '\n';
  sink.commit();
  if (trace) {
    trace->stream() << trace_csv.str();
    trace->commit();
  }
  return all_ok ? kExitOk : kExitVerifyFailed;
}

/// "--domain -1:1" would read as a flag; glue negative values to their option.
std::vector<std::string> glue_negative_values(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    const bool takes_value = a == "--domain" || a == "--initial-frame" || a == "--initial-position";
    if (takes_value && i + 1 < args.size() && args[i + 1].size() > 1 && args[i + 1][0] == '-' &&
        (std::isdigit(static_cast<unsigned char>(args[i + 1][1])) || args[i + 1][1] == '.')) {
      out.push_back(a + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> v;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(std::string(what) + " must be a comma-separated list of numbers");
    }
  }
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Natural and conjugate mates of Frenet curves in 3-dimensional Lie groups", "curve-mates"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_file, group, kappa, tau, domain, out_path, trace_path, mode, kind, theorems, path, frame, position;
  double step = 0.0;
  bool show_tolerances = false;
  auto* o_config = app.add_option("--config", config_file, "JSON run configuration (flags override it)");
  auto* o_group = app.add_option("--group", group, "r3, so3 or s3");
  auto* o_kappa = app.add_option("--kappa", kappa, "curvature expression in s");
  auto* o_tau = app.add_option("--tau", tau, "torsion expression in s");
  auto* o_domain = app.add_option("--domain", domain, "parameter interval a:b");
  auto* o_step = app.add_option("--step", step, "grid step h (default 1e-3)");
  auto* o_out = app.add_option("--out", out_path, "output file (default: standard output)");
  auto* o_trace = app.add_option("--trace", trace_path, "verify: per-sample residual CSV");
  auto* o_mode = app.add_option("--mode", mode, "mate: analytic, geometric or both");
  auto* o_kind = app.add_option("--kind", kind, "mate: natural or conjugate");
  auto* o_theorems = app.add_option("--theorems", theorems, "verify: comma-separated ids or 'all'");
  auto* o_path = app.add_option("--path", path, "verify: analytic or estimated");
  auto* o_frame = app.add_option("--initial-frame", frame, "T, N, B rows as 9 comma-separated numbers");
  auto* o_position = app.add_option("--initial-position", position, "initial group element, ambient coordinates");
  app.add_flag("--show-tolerances", show_tolerances, "print the default tolerance table and exit");
  ToleranceSet defaults;
  std::vector<std::pair<std::string, CLI::Option*>> tol_opts;
  std::vector<double> tol_values(defaults.entries().size());
  for (std::size_t i = 0; i < defaults.entries().size(); ++i) {
    std::string name = defaults.entries()[i].first;
    std::string flag = "--tol-" + name;
    std::replace(flag.begin(), flag.end(), '_', '-');
    tol_opts.emplace_back(name, app.add_option(flag, tol_values[i], "tolerance " + name));
  }
  auto* sub_synth = app.add_subcommand("synthesize", "integrate frame and position, write CSV");
  auto* sub_mate = app.add_subcommand("mate", "natural or conjugate mate, write CSV");
  auto* sub_classify = app.add_subcommand("classify", "classification report (JSON)");
  auto* sub_verify = app.add_subcommand("verify", "theorem verification report (JSON)");

  std::vector<std::string> args = glue_negative_values(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (show_tolerances) {
    Json j;
    j["schema_version"] = "1";
    Json t;
    for (const auto& [n, v] : defaults.entries()) t[n] = v;
    j["tolerances"] = t;
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  try {
    RunConfig c;
    if (o_config->count()) apply_config_file(config_file, c);
    if (o_group->count()) c.group = group;
    if (o_kappa->count()) c.kappa = kappa;
    if (o_tau->count()) c.tau = tau;
    if (o_domain->count()) c.domain = parse_domain(domain);
    if (o_step->count()) c.step = step;
    if (o_out->count()) c.out = out_path;
    if (o_trace->count()) c.trace = trace_path;
    if (o_mode->count()) c.mode = mode;
    if (o_kind->count()) c.kind = kind;
    if (o_theorems->count()) c.theorems = split_list(theorems);
    if (o_path->count()) c.path = path;
    if (o_frame->count()) c.initial_frame = parse_numbers(frame, "--initial-frame");
    if (o_position->count()) c.initial_position = parse_numbers(position, "--initial-position");
    for (std::size_t i = 0; i < tol_opts.size(); ++i)
      if (tol_opts[i].second->count()) c.tols.set(tol_opts[i].first, tol_values[i]);

    if (app.get_subcommands().empty()) throw UsageError("a command is required: synthesize, mate, classify or verify");
    validate(c);
    const GroupSpec spec = GroupSpec::from_name(c.group);
    const CurvatureProfile p = CurvatureProfile::parse(c.kappa, c.tau, *c.domain, c.step);
    if (sub_synth->parsed()) return cmd_synthesize(c, p, spec, out);
    if (sub_mate->parsed()) return cmd_mate(c, p, spec, out);
    if (sub_classify->parsed()) return cmd_classify(c, p, spec, out);
    if (sub_verify->parsed()) return cmd_verify(c, p, spec, out);
    return kExitUsage;
  } catch (const NotAFrenetMate& e) {
    err << "error: " << e.what() << '\n';
    err << "zero crossings of tau - tau_G:";
    for (double z : e.zero_crossings()) err << ' ' << num(z);
    err << '\n';
    return kExitNotAFrenetMate;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const FrenetViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace curvemates
