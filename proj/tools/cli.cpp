#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "doflab/bounds.hpp"
#include "doflab/engine.hpp"
#include "doflab/error.hpp"
#include "doflab/polytope.hpp"
#include "doflab/rates.hpp"
#include "doflab/scheme.hpp"

namespace doflab::cli {
namespace {

using Json = nlohmann::ordered_json;

// Bad flag values found after CLI11 parsing; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Text, Json, Csv };

struct RegionFlags {
  int users = 3;
  int perfect = 1;
  bool private_only = false;
  std::string slice;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    parts.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return parts;
}

Rational parse_rational(const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const Error& e) {
    throw UsageError("invalid rational '" + text + "': " + e.what());
  }
}

UserSubset parse_label(const std::string& text, int users) {
  UserSubset s;
  try {
    s = UserSubset::parse(text);
  } catch (const Error& e) {
    throw UsageError("invalid subset label '" + text + "': " + e.what());
  }
  if (s.empty() || s.max_member() > users) throw UsageError("subset " + text + " is not a subset of 1.." + std::to_string(users));
  return s;
}

// "d_1=1,d_23=1/2"
std::map<UserSubset, Rational> parse_assignments(const std::string& text, int users) {
  std::map<UserSubset, Rational> out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected label=value, got '" + item + "'");
    const auto s = parse_label(item.substr(0, eq), users);
    if (out.contains(s)) throw UsageError("duplicate entry for " + s.label());
    out.emplace(s, parse_rational(item.substr(eq + 1)));
  }
  return out;
}

// Positional "1,1/2,1/2" in the region's variable order, or named assignments.
std::map<UserSubset, Rational> parse_vector(const std::string& text, const Region& region) {
  if (text.find('=') != std::string::npos) return parse_assignments(text, region.users());
  const auto parts = split(text, ',');
  if (parts.size() != region.dimension()) {
    throw UsageError("expected " + std::to_string(region.dimension()) + " comma-separated values, got " +
                     std::to_string(parts.size()));
  }
  std::map<UserSubset, Rational> out;
  for (std::size_t i = 0; i < parts.size(); ++i) out.emplace(region.variables()[i], parse_rational(parts[i]));
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("DOFLAB_SEED");
  if (!env || !*env) return 1;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("DOFLAB_SEED is not an unsigned integer: '") + env + "'");
  }
}

Region build_region(const RegionFlags& f) {
  if (f.users < 1 || f.users > kMaxUsers) throw UsageError("--users must be in 1.." + std::to_string(kMaxUsers));
  if (f.perfect < 0 || f.perfect > f.users) throw UsageError("--perfect must be in 0..users");
  Region r = full_region(f.users, f.perfect);
  if (f.private_only) r = restrict_private(r);
  const auto fixes = parse_assignments(f.slice, f.users);
  return slice(r, fixes);
}

std::string rstr(const Rational& r) { return r.str(); }

std::string point_str(const DofPoint& p, const std::vector<UserSubset>& order) { return p.str(order); }

Json point_json(const DofPoint& p, const std::vector<UserSubset>& order) {
  Json j = Json::object();
  for (const auto& s : order) j[s.label()] = rstr(p.get(s));
  return j;
}

Json row_json(const Region& region, std::size_t i, const RowValue* value) {
  const auto& row = region.inequalities()[i];
  Json j;
  j["index"] = i;
  j["inequality"] = row.str();
  j["provenance"] = describe(row.origin());
  if (value) {
    j["lhs"] = rstr(value->lhs);
    j["bound"] = rstr(value->bound);
  }
  return j;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// Relates a vertex to the shipped schedules' symbol-count tuples.
std::string vertex_status(const DofPoint& lifted, int perfect) {
  std::string alternating;
  for (const auto& name : builtin_names()) {
    const Scheme s = parse_scheme(builtin_source(name));
    if (s.users != lifted.users()) continue;
    DofPoint nominal(s.users);
    for (int r = 1; r <= s.users; ++r) {
      nominal.set(UserSubset::of({r}), Rational(BigInt(s.desired_columns(r).size()), BigInt(s.slots)));
    }
    bool dominated = true;
    for (const auto& [sub, v] : lifted.values()) {
      if (v > nominal.get(sub)) dominated = false;
    }
    if (!dominated) continue;
    const auto cfg = s.csit();
    if (cfg.is_static_hybrid() && cfg.perfect_users() == perfect) {
      return nominal == lifted ? "achieved by " + name : "achievable (dominated by " + name + ")";
    }
    if (alternating.empty()) {
      alternating = nominal == lifted ? "achieved under alternating CSIT (" + name + ")"
                                      : "achievable under alternating CSIT (dominated by " + name + ")";
    }
  }
  return alternating.empty() ? "outer-bound vertex, achievability unknown" : alternating;
}

Scheme load_scheme(const std::string& source) {
  if (std::filesystem::is_regular_file(source)) {
    std::ifstream in(source);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scheme(buf.str());
  }
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), source) != names.end()) return parse_scheme(builtin_source(source));
  throw UsageError("'" + source + "' is neither a readable file nor a built-in scheme");
}

Json dof_json(const DofPoint& p, int users) {
  Json j = Json::array();
  for (int r = 1; r <= users; ++r) j.push_back(rstr(p.get(UserSubset::of({r}))));
  return j;
}

std::string tuple_str(const DofPoint& p, int users) {
  std::vector<UserSubset> order;
  for (int r = 1; r <= users; ++r) order.push_back(UserSubset::of({r}));
  return p.str(order);
}

class Runner {
 public:
  std::ostringstream out;
  std::ostringstream err;

  int bounds(const RegionFlags& f, bool want_vertices, bool irredundant, Format fmt) {
    Region region = build_region(f);
    if (irredundant) region = remove_redundant(region);
    std::vector<DofPoint> verts;
    if (want_vertices) verts = vertices(region);
    const auto fixes = parse_assignments(f.slice, f.users);
    auto lift = [&](const DofPoint& v) {
      DofPoint p = v;
      for (const auto& [s, x] : fixes) p.set(s, x);
      return p;
    };
    const auto& vars = region.variables();

    if (fmt == Format::Json) {
      Json j;
      j["users"] = f.users;
      j["perfect"] = f.perfect;
      j["private"] = f.private_only;
      Json sl = Json::object();
      for (const auto& [s, x] : fixes) sl[s.label()] = rstr(x);
      j["slice"] = sl;
      Json jv = Json::array();
      for (const auto& v : vars) jv.push_back(v.label());
      j["variables"] = jv;
      Json rows = Json::array();
      for (const auto& row : region.inequalities()) {
        const auto [coef, rhs] = row.display_form();
        Json c = Json::object();
        for (const auto& [s, a] : coef) c[s.label()] = rstr(a);
        rows.push_back(Json{{"inequality", row.str()}, {"coefficients", c}, {"rhs", rstr(rhs)},
                            {"provenance", describe(row.origin())}});
      }
      j["inequalities"] = rows;
      if (want_vertices) {
        Json vs = Json::array();
        for (const auto& v : verts) {
          vs.push_back(Json{{"point", point_json(v, vars)}, {"status", vertex_status(lift(v), f.perfect)}});
        }
        j["vertices"] = vs;
      }
      out << j.dump(2) << "\n";
    } else if (fmt == Format::Csv) {
      if (want_vertices) {
        for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? "," : "") << vars[i].label();
        out << (vars.empty() ? "" : ",") << "status\n";
        for (const auto& v : verts) {
          for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? "," : "") << rstr(v.get(vars[i]));
          out << (vars.empty() ? "" : ",") << csv_escape(vertex_status(lift(v), f.perfect)) << "\n";
        }
      } else {
        out << region_csv(region);
      }
    } else {
      out << "region: K=" << f.users << " K_P=" << f.perfect << (f.private_only ? " private" : "");
      for (const auto& [s, x] : fixes) out << " " << s.label() << "=" << rstr(x);
      out << "\nvariables:";
      for (const auto& v : vars) out << " " << v.label();
      out << "\ninequalities: " << region.inequalities().size() << "\n";
      for (std::size_t i = 0; i < region.inequalities().size(); ++i) {
        const auto& row = region.inequalities()[i];
        out << "  " << std::left << std::setw(44) << row.str() << " " << describe(row.origin()) << "\n";
      }
      if (want_vertices) {
        out << "vertices: " << verts.size() << "\n";
        for (const auto& v : verts) {
          out << "  " << std::left << std::setw(24) << point_str(v, vars) << " " << vertex_status(lift(v), f.perfect)
              << "\n";
        }
      }
    }
    return 0;
  }

  int check(const RegionFlags& f, const std::string& point_text, Format fmt) {
    const Region region = build_region(f);
    if (point_text.empty()) throw UsageError("--point is required");
    DofPoint p(f.users);
    for (const auto& [s, v] : parse_vector(point_text, region)) p.set(s, v);
    const auto v = contains(region, p);
    emit_verdict(region, v, fmt, [&](Json& j) { j["point"] = point_json(p, region.variables()); });
    return v.feasible ? 0 : 1;
  }

  int maximize_cmd(const RegionFlags& f, const std::string& weight_text, Format fmt) {
    const Region region = build_region(f);
    std::map<UserSubset, Rational> w;
    if (weight_text.empty()) {
      for (const auto& s : region.variables()) w.emplace(s, Rational(1));
    } else {
      w = parse_vector(weight_text, region);
    }
    const auto opt = maximize(region, w);
    const auto& vars = region.variables();
    if (fmt == Format::Json) {
      Json jw = Json::object();
      for (const auto& s : vars) {
        auto it = w.find(s);
        jw[s.label()] = rstr(it == w.end() ? Rational(0) : it->second);
      }
      Json j;
      j["weights"] = jw;
      j["value"] = rstr(opt.value);
      j["argpoint"] = point_json(opt.argpoint, vars);
      out << j.dump(2) << "\n";
    } else if (fmt == Format::Csv) {
      out << "value";
      for (const auto& s : vars) out << "," << s.label();
      out << "\n" << rstr(opt.value);
      for (const auto& s : vars) out << "," << rstr(opt.argpoint.get(s));
      out << "\n";
    } else {
      out << "value: " << rstr(opt.value) << "\n";
      out << "argpoint: " << point_str(opt.argpoint, vars) << "\n";
    }
    return 0;
  }

  int feas(int users, int perfect, const std::string& residual, long long slots, Format fmt) {
    if (users < 1 || users > kMaxUsers) throw UsageError("--users must be in 1.." + std::to_string(kMaxUsers));
    if (perfect < 0 || perfect > users) throw UsageError("--perfect must be in 0..users");
    if (slots < 0) throw UsageError("--slots must be nonnegative");
    ResidualDemand d;
    d.slots = slots;
    for (const auto& [s, v] : parse_assignments(residual, users)) {
      if (!v.is_integer() || v.sign() < 0) throw UsageError("residual count for " + s.label() + " must be a nonnegative integer");
      d.cardinalities[s] = static_cast<std::int64_t>(v.num());
    }
    const auto verdict = extension_feasibility(users, perfect, d);
    const Region rows(users, canonical_subsets(users), theorem1_inequalities(users, perfect));
    emit_verdict(rows, verdict, fmt, [&](Json& j) {
      Json r = Json::object();
      for (const auto& [s, n] : d.cardinalities) r[s.label()] = n;
      j["residual"] = r;
      j["slots"] = slots;
    });
    return verdict.feasible ? 0 : 1;
  }

  int parse_cmd(const std::string& source, Format fmt) {
    const Scheme s = load_scheme(source);
    const std::string canonical = emit_scheme(s);
    if (fmt == Format::Json) {
      Json j;
      j["name"] = s.name;
      j["users"] = s.users;
      j["antennas"] = s.antennas;
      j["slots"] = s.slots;
      j["symbols"] = s.symbols.size();
      j["canonical"] = canonical;
      out << j.dump(2) << "\n";
    } else {
      out << canonical;
    }
    return 0;
  }

  int validate_cmd(const std::string& source, Format fmt) {
    const Scheme s = load_scheme(source);
    const auto rep = validate(s);
    if (fmt == Format::Json) {
      Json issues = Json::array();
      for (const auto& i : rep.issues) {
        issues.push_back(Json{{"slot", i.slot}, {"kind", std::string(issue_kind_name(i.kind))}, {"detail", i.detail}});
      }
      out << Json{{"scheme", s.name}, {"ok", rep.ok}, {"issues", issues}}.dump(2) << "\n";
    } else if (fmt == Format::Csv) {
      out << "slot,kind,detail\n";
      for (const auto& i : rep.issues) out << i.slot << "," << issue_kind_name(i.kind) << "," << csv_escape(i.detail) << "\n";
    } else {
      out << s.name << ": " << (rep.ok ? "ok" : std::to_string(rep.issues.size()) + " issue(s)") << "\n";
      for (const auto& i : rep.issues) out << "  slot " << i.slot << ": " << issue_kind_name(i.kind) << ": " << i.detail << "\n";
    }
    return rep.ok ? 0 : 1;
  }

  int sim(const std::string& source, int trials, std::uint64_t seed, const std::string& mode_text, int threads,
          Format fmt) {
    if (trials < 1) throw UsageError("--trials must be at least 1");
    if (threads < 1) throw UsageError("--threads must be at least 1");
    ArithmeticMode mode;
    try {
      mode = parse_mode(mode_text);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    const Scheme s = load_scheme(source);
    const auto issues = validate(s);
    const auto rep = simulate(s, trials, seed, mode, threads);
    for (const auto& i : issues.issues) {
      err << "warning: slot " << i.slot << ": " << issue_kind_name(i.kind) << ": " << i.detail << "\n";
    }
    if (fmt == Format::Json) {
      Json j;
      j["scheme"] = s.name;
      j["trials"] = rep.trials;
      j["successes_per_receiver"] = rep.successes_per_receiver;
      j["achieved_dof"] = rep.achieved_dof ? dof_json(*rep.achieved_dof, s.users) : Json(nullptr);
      j["mode"] = std::string(mode_name(rep.mode));
      j["seed"] = rep.seed;
      j["full_successes"] = rep.full_successes;
      j["nominal_dof"] = dof_json(rep.nominal_dof, s.users);
      out << j.dump(2) << "\n";
    } else if (fmt == Format::Csv) {
      out << "receiver,desired,successes,trials\n";
      for (int r = 1; r <= s.users; ++r) {
        out << "R" << r << "," << s.desired_columns(r).size() << "," << rep.successes_per_receiver[static_cast<std::size_t>(r - 1)]
            << "," << rep.trials << "\n";
      }
    } else {
      out << "scheme: " << s.name << "  mode: " << mode_name(rep.mode) << "  seed: " << rep.seed
          << "  trials: " << rep.trials << "\n";
      out << "receiver  desired  decodable\n";
      for (int r = 1; r <= s.users; ++r) {
        out << std::left << std::setw(10) << ("R" + std::to_string(r)) << std::setw(9)
            << s.desired_columns(r).size() << rep.successes_per_receiver[static_cast<std::size_t>(r - 1)] << "/"
            << rep.trials << "\n";
      }
      out << "all receivers decodable: " << rep.full_successes << "/" << rep.trials << "\n";
      out << "achieved dof: " << (rep.achieved_dof ? tuple_str(*rep.achieved_dof, s.users) : std::string("none"))
          << "\n";
    }
    return rep.achieved_dof ? 0 : 1;
  }

  int rate(const std::string& source, std::uint64_t seed, const std::string& snr_text, Format fmt) {
    const auto parts = split(snr_text, ',');
    if (parts.size() != 2) throw UsageError("--snr-db expects two values A,B");
    double a = 0;
    double b = 0;
    try {
      a = std::stod(parts[0]);
      b = std::stod(parts[1]);
    } catch (const std::exception&) {
      throw UsageError("--snr-db values must be numbers");
    }
    const Scheme s = load_scheme(source);
    const auto slopes = dof_slope(s, seed, {a, b});
    if (fmt == Format::Json) {
      Json rs = Json::array();
      for (const auto& r : slopes) {
        rs.push_back(Json{{"receiver", r.receiver},
                          {"bits", Json::array({r.bits_low, r.bits_high})},
                          {"slope", r.slope},
                          {"rank_flag", r.rank_deficient ? "rank-deficient" : "ok"}});
      }
      out << Json{{"scheme", s.name}, {"seed", seed}, {"snr_db", Json::array({std::min(a, b), std::max(a, b)})},
                  {"receivers", rs}}
                 .dump(2)
          << "\n";
    } else if (fmt == Format::Csv) {
      out << "receiver,bits_low,bits_high,slope,rank_flag\n";
      for (const auto& r : slopes) {
        out << "R" << r.receiver << "," << std::setprecision(17) << r.bits_low << "," << r.bits_high << "," << r.slope
            << "," << (r.rank_deficient ? "rank-deficient" : "ok") << "\n";
      }
    } else {
      out << "scheme: " << s.name << "  seed: " << seed << "  snr: " << std::min(a, b) << "," << std::max(a, b)
          << " dB\n";
      out << "receiver  bits@low     bits@high    slope    nominal\n";
      for (const auto& r : slopes) {
        const auto nominal = Rational(BigInt(s.desired_columns(r.receiver).size()), BigInt(s.slots));
        out << std::left << std::setw(10) << ("R" + std::to_string(r.receiver)) << std::fixed << std::setprecision(4)
            << std::setw(13) << r.bits_low << std::setw(13) << r.bits_high << std::setw(9) << r.slope << rstr(nominal)
            << (r.rank_deficient ? "  rank-deficient" : "") << "\n";
      }
    }
    return 0;
  }

  int builtin_cmd(const std::string& name, bool emit) {
    if (name.empty()) {
      for (const auto& n : builtin_names()) out << n << "\n";
      return 0;
    }
    out << (emit ? builtin(name) : builtin_source(name));
    return 0;
  }

 private:
  template <typename Extra>
  void emit_verdict(const Region& region, const MembershipVerdict& v, Format fmt, Extra extra) {
    if (fmt == Format::Json) {
      Json j;
      extra(j);
      j["feasible"] = v.feasible;
      Json tight = Json::array();
      for (auto i : v.tight) tight.push_back(row_json(region, i, &v.values[i]));
      Json violated = Json::array();
      for (auto i : v.violated) violated.push_back(row_json(region, i, &v.values[i]));
      j["tight"] = tight;
      j["violated"] = violated;
      out << j.dump(2) << "\n";
    } else if (fmt == Format::Csv) {
      out << "index,inequality,provenance,lhs,bound,status\n";
      for (std::size_t i = 0; i < v.values.size(); ++i) {
        const bool bad = std::find(v.violated.begin(), v.violated.end(), i) != v.violated.end();
        const bool tight = std::find(v.tight.begin(), v.tight.end(), i) != v.tight.end();
        const auto& row = region.inequalities()[i];
        out << i << "," << csv_escape(row.str()) << "," << csv_escape(describe(row.origin())) << ","
            << rstr(v.values[i].lhs) << "," << rstr(v.values[i].bound) << ","
            << (bad ? "violated" : tight ? "tight" : "slack") << "\n";
      }
    } else {
      out << (v.feasible ? "feasible" : "infeasible") << " (" << v.violated.size() << " violated, " << v.tight.size()
          << " tight, " << v.values.size() << " rows)\n";
      for (auto i : v.violated) {
        const auto& row = region.inequalities()[i];
        out << "  violated: " << row.str() << "  [" << describe(row.origin()) << "]  " << rstr(v.values[i].lhs)
            << " > " << rstr(v.values[i].bound) << "\n";
      }
      for (auto i : v.tight) {
        const auto& row = region.inequalities()[i];
        out << "  tight:    " << row.str() << "  [" << describe(row.origin()) << "]  " << rstr(v.values[i].lhs)
            << " = " << rstr(v.values[i].bound) << "\n";
      }
    }
  }
};

void add_region_flags(CLI::App* cmd, RegionFlags& f) {
  cmd->add_option("--users", f.users, "number of users K")->capture_default_str();
  cmd->add_option("--perfect", f.perfect, "number of perfect-CSIT users K_P")->capture_default_str();
  cmd->add_flag("--private", f.private_only, "keep only private-message variables");
  cmd->add_option("--slice", f.slice, "fix variables, e.g. d_1=1");
}

}  // namespace

Outcome run(const std::vector<std::string>& args) {
  CLI::App app{"doflab: DoF outer bounds and linear scheme verification for the MISO broadcast channel"};
  app.name("doflab");
  app.require_subcommand(1);

  std::string format_text = "text";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_text, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
  };

  RegionFlags rf;
  bool want_vertices = false;
  bool irredundant = false;
  std::string point_text;
  std::string weight_text;
  std::string residual;
  long long slots = 0;
  std::string source;
  int trials = 100;
  std::string seed_text;
  std::string mode_text = "field";
  int threads = 1;
  std::string snr_text = "60,100";
  bool emit = false;

  auto* bounds_cmd = app.add_subcommand("bounds", "print the outer-bound region");
  add_region_flags(bounds_cmd, rf);
  bounds_cmd->add_flag("--vertices", want_vertices, "enumerate vertices");
  bounds_cmd->add_flag("--irredundant", irredundant, "drop rows implied by the others");
  add_format(bounds_cmd);

  auto* check_cmd = app.add_subcommand("check", "test a DoF point against the region");
  add_region_flags(check_cmd, rf);
  check_cmd->add_option("--point", point_text, "comma-separated values or label=value list")->required();
  add_format(check_cmd);

  auto* max_cmd = app.add_subcommand("maximize", "maximize a weighted sum over the region");
  add_region_flags(max_cmd, rf);
  max_cmd->add_option("--weights", weight_text, "comma-separated weights or label=value list (default all ones)");
  add_format(max_cmd);

  auto* feas_cmd = app.add_subcommand("feas", "test residual symbol counts against a slot budget");
  feas_cmd->add_option("--users", rf.users, "number of users K")->capture_default_str();
  feas_cmd->add_option("--perfect", rf.perfect, "number of perfect-CSIT users K_P")->capture_default_str();
  feas_cmd->add_option("--residual", residual, "label=count list, e.g. d_1=3,d_12=1")->required();
  feas_cmd->add_option("--slots", slots, "slot budget")->required();
  add_format(feas_cmd);

  auto* parse_cmd = app.add_subcommand("parse", "parse a scheme and print its canonical form");
  parse_cmd->add_option("scheme", source, "file or built-in name")->required();
  add_format(parse_cmd);

  auto* validate_cmd = app.add_subcommand("validate", "check a scheme for causality and CSIT issues");
  validate_cmd->add_option("scheme", source, "file or built-in name")->required();
  add_format(validate_cmd);

  auto* sim_cmd = app.add_subcommand("sim", "run random-channel decodability trials");
  sim_cmd->add_option("scheme", source, "file or built-in name")->required();
  sim_cmd->add_option("--trials", trials, "number of trials")->capture_default_str();
  sim_cmd->add_option("--seed", seed_text, "master seed (default $DOFLAB_SEED or 1)");
  sim_cmd->add_option("--mode", mode_text, "field, rational or float")
      ->check(CLI::IsMember({"field", "prime", "rational", "float", "complex"}))
      ->capture_default_str();
  sim_cmd->add_option("--threads", threads, "worker threads")->capture_default_str();
  add_format(sim_cmd);

  auto* rate_cmd = app.add_subcommand("rate", "estimate per-receiver DoF from mutual information slopes");
  rate_cmd->add_option("scheme", source, "file or built-in name")->required();
  rate_cmd->add_option("--seed", seed_text, "channel seed (default $DOFLAB_SEED or 1)");
  rate_cmd->add_option("--snr-db", snr_text, "two SNR values in dB, A,B")->capture_default_str();
  add_format(rate_cmd);

  auto* builtin_cmd = app.add_subcommand("builtin", "list or print shipped schemes");
  builtin_cmd->add_option("name", source, "scheme name (omit to list)");
  builtin_cmd->add_flag("--emit", emit, "print the canonical form instead of the annotated file");

  Runner runner;
  Outcome result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    result.code = app.exit(e, runner.out, runner.err);
    if (result.code != 0) result.code = 2;
    result.out = runner.out.str();
    result.err = runner.err.str();
    return result;
  }

  try {
    const Format fmt = format_text == "json" ? Format::Json : format_text == "csv" ? Format::Csv : Format::Text;
    std::uint64_t seed = 0;
    if (!seed_text.empty()) {
      try {
        std::size_t used = 0;
        seed = std::stoull(seed_text, &used, 0);
        if (used != seed_text.size() || seed_text[0] == '-') throw std::invalid_argument("bad seed");
      } catch (const std::exception&) {
        throw UsageError("--seed must be an unsigned integer");
      }
    } else if (*sim_cmd || *rate_cmd) {
      seed = default_seed();
    }

    if (*bounds_cmd) {
      result.code = runner.bounds(rf, want_vertices, irredundant, fmt);
    } else if (*check_cmd) {
      result.code = runner.check(rf, point_text, fmt);
    } else if (*max_cmd) {
      result.code = runner.maximize_cmd(rf, weight_text, fmt);
    } else if (*feas_cmd) {
      result.code = runner.feas(rf.users, rf.perfect, residual, slots, fmt);
    } else if (*parse_cmd) {
      result.code = runner.parse_cmd(source, fmt);
    } else if (*validate_cmd) {
      result.code = runner.validate_cmd(source, fmt);
    } else if (*sim_cmd) {
      result.code = runner.sim(source, trials, seed, mode_text, threads, fmt);
    } else if (*rate_cmd) {
      result.code = runner.rate(source, seed, snr_text, fmt);
    } else if (*builtin_cmd) {
      result.code = runner.builtin_cmd(source, emit);
    }
  } catch (const UsageError& e) {
    runner.err << "error: " << e.what() << "\n";
    result.code = 2;
  } catch (const ParameterError& e) {
    runner.err << "error: " << e.what() << "\n";
    result.code = 2;
  } catch (const DimensionError& e) {
    runner.err << "error: " << e.what() << "\n";
    result.code = 2;
  } catch (const Error& e) {
    runner.err << "error: " << e.what() << "\n";
    result.code = 1;
  }
  result.out = runner.out.str();
  result.err = runner.err.str();
  return result;
}

}  // namespace doflab::cli
