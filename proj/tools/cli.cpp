#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "meanx/descriptor_io.hpp"
#include "meanx/envelopes.hpp"
#include "meanx/errors.hpp"
#include "meanx/extension.hpp"
#include "meanx/format.hpp"
#include "meanx/gini.hpp"
#include "meanx/incidence_graph.hpp"
#include "meanx/verify.hpp"

namespace meanx::cli {

namespace {

using Json = nlohmann::ordered_json;

// Reads --config files. Nested objects address subcommands
// ({"extend": {"tol": 1e-12}}); a top-level "command" key sends the flat keys
// next to it to that subcommand.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json j;
    try {
      input >> j;
    } catch (const Json::exception& e) {
      throw CLI::ConversionError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<std::string> prefix;
    if (const auto it = j.find("command"); it != j.end() && it->is_string()) {
      prefix.push_back(it->get<std::string>());
    }
    std::vector<CLI::ConfigItem> items;
    if (!prefix.empty()) items.push_back(marker(prefix, "++"));
    collect(j, prefix, items);
    if (!prefix.empty()) items.push_back(marker(prefix, "--"));
    return items;
  }

 private:
  // Opens or closes a subcommand section, which is what marks it as used.
  static CLI::ConfigItem marker(std::vector<std::string> parents, std::string name) {
    CLI::ConfigItem item;
    item.parents = std::move(parents);
    item.name = std::move(name);
    return item;
  }

  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return format_real(v.get<double>());
    return v.dump();
  }

  static void collect(const Json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (key == "command" && parents.size() <= 1) continue;
      if (value.is_object()) {
        // A nested block names a subcommand and replaces the "command" prefix.
        items.push_back(marker({key}, "++"));
        collect(value, {key}, items);
        items.push_back(marker({key}, "--"));
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    if (first != last && *first == '+') ++first;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw ParseError("expected a comma-separated list of finite numbers, got \"" + text + "\"");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

GiniParams parse_pair(const std::string& text) {
  const auto v = parse_reals(text);
  if (v.size() != 2) throw ParseError("expected two parameters R,S, got \"" + text + "\"");
  return {v[0], v[1]};
}

Json reals(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

struct Common {
  double tol = IterationConfig{}.rel_tol;
  std::size_t max_iter = IterationConfig{}.max_iter;
  std::size_t max_arity = IterationConfig{}.max_arity;
  std::uint64_t budget = IterationConfig{}.call_budget;

  IterationConfig config() const {
    IterationConfig cfg;
    cfg.rel_tol = tol;
    cfg.max_iter = max_iter;
    cfg.max_arity = max_arity;
    cfg.call_budget = budget;
    cfg.validate();
    return cfg;
  }
};

void add_iteration_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--tol", c.tol, "Relative tolerance of the fixed-point iteration")
      ->capture_default_str();
  cmd->add_option("--max-iter", c.max_iter, "Iteration cap per level")->capture_default_str();
  cmd->add_option("--max-arity", c.max_arity, "Largest arity the iterative extension accepts")
      ->capture_default_str();
  cmd->add_option("--budget", c.budget, "Bivariate-call budget of one extension")
      ->envname("MEANX_BUDGET")
      ->capture_default_str();
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err, std::istream& in) : out_(out), err_(err), in_(in) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Invariant and iterative extensions of means"};
    app.name("meanx");
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file with option values");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.add_option("-o,--output", output_path_, "Write the result to a file instead of stdout");

    setup_extend(app);
    setup_check_ergodic(app);
    setup_verify(app);
    setup_gini_region(app);
    setup_gini_sweep(app);
    setup_envelope(app);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      std::ostringstream help;
      const int code = app.exit(e, help, err_);
      out_ << help.str();
      return code == 0 ? kOk : kUsage;
    }

    std::ostringstream result;
    int code = kOk;
    try {
      code = action_(result);
    } catch (const NotConverged& e) {
      Json j;
      j["converged"] = false;
      j["lo"] = e.lo();
      j["hi"] = e.hi();
      j["level"] = e.level();
      j["iterations"] = e.iterations();
      j["error"] = e.what();
      result << j.dump() << '\n';
      err_ << "meanx: " << e.what() << '\n';
      code = kNoConvergence;
    } catch (const ResourceLimit& e) {
      err_ << "meanx: " << e.what() << '\n';
      return kNoConvergence;
    } catch (const NumericalError& e) {
      err_ << "meanx: " << e.what() << '\n';
      return kNoConvergence;
    } catch (const MeanError& e) {
      err_ << "meanx: " << e.what() << '\n';
      return kUsage;
    } catch (const std::invalid_argument& e) {
      err_ << "meanx: " << e.what() << '\n';
      return kUsage;
    } catch (const Json::exception& e) {
      err_ << "meanx: " << e.what() << '\n';
      return kUsage;
    }

    if (output_path_.empty()) {
      out_ << result.str();
    } else {
      std::ofstream file(output_path_);
      if (!file) {
        err_ << "meanx: cannot write " << output_path_ << '\n';
        return kUsage;
      }
      file << result.str();
    }
    return code;
  }

 private:
  // ---- extend -------------------------------------------------------------

  void setup_extend(CLI::App& app) {
    auto* cmd = app.add_subcommand("extend", "Iterative extension of a bivariate mean at x");
    cmd->configurable();
    cmd->add_option("--mean", mean_text_, "Mean descriptor, e.g. gini:1,-1 or ext(power:2)")
        ->required();
    cmd->add_option("--x", x_text_, "Comma-separated point")->required();
    cmd->add_flag("--analytic-shortcut", shortcut_,
                  "Evaluate quasiarithmetic bases in closed form instead of iterating");
    cmd->add_flag("--trace", trace_, "Stream top-level iterates as JSON lines");
    add_iteration_options(cmd, common_);
    cmd->callback([this] { action_ = [this](std::ostream& o) { return extend(o); }; });
  }

  int extend(std::ostream& o) {
    MeanDescriptor mean = parse_mean(mean_text_);
    if (const auto* e = mean.as<ExtendedMean>()) mean = e->base;
    const PointVector x(parse_reals(x_text_));
    IterationConfig cfg = common_.config();
    if (trace_) {
      cfg.trace = [&o](const TraceEvent& ev) {
        Json line;
        line["iteration"] = ev.iteration;
        line["iterate"] = reals(ev.iterate);
        line["gap"] = ev.gap;
        o << line.dump() << '\n';
      };
    }

    Json j;
    j["mean"] = to_string(mean);
    std::optional<GeneratorDescriptor> closed_form;
    if (const auto* q = mean.as<QuasiArithmeticMean>()) closed_form = q->gen;
    if (const auto* p = mean.as<PowerMean>()) closed_form = GeneratorDescriptor::power(p->r);
    if (shortcut_ && closed_form && x.size() <= cfg.max_arity) {
      j["value"] = eval_quasiarithmetic(*closed_form, x);
      j["iterations"] = 0;
      j["final_gap"] = 0.0;
      j["converged"] = true;
      j["shortcut"] = true;
    } else {
      const ExtensionResult r = iterative_extension_eval(mean, x, cfg);
      j["value"] = r.value;
      j["iterations"] = r.iterations;
      j["final_gap"] = r.final_gap;
      j["converged"] = r.converged;
      j["base_calls"] = r.base_calls;
      if (!r.warnings.empty()) j["warnings"] = r.warnings;
    }
    o << j.dump() << '\n';
    return kOk;
  }

  // ---- check-ergodic ------------------------------------------------------

  void setup_check_ergodic(CLI::App& app) {
    auto* cmd = app.add_subcommand("check-ergodic", "Ergodicity of an index family");
    cmd->configurable();
    auto* inline_opt = cmd->add_option("--family", family_text_,
                                       R"(Family as JSON, e.g. {"p":2,"alpha":[[2],[1]]})");
    cmd->add_option("--family-file", family_file_, "File holding the family JSON")
        ->check(CLI::ExistingFile)
        ->excludes(inline_opt);
    cmd->callback([this] { action_ = [this](std::ostream& o) { return check_ergodic(o); }; });
  }

  int check_ergodic(std::ostream& o) {
    Json fam;
    if (!family_text_.empty()) {
      fam = Json::parse(family_text_);
    } else if (!family_file_.empty()) {
      std::ifstream f(family_file_);
      fam = Json::parse(f);
    } else {
      fam = Json::parse(in_);
    }
    const auto p = fam.at("p").get<std::size_t>();
    const auto alpha = fam.at("alpha").get<std::vector<std::vector<std::size_t>>>();
    const ErgodicityReport rep = is_ergodic(IndexFamily(p, alpha));
    Json j;
    j["p"] = p;
    j["irreducible"] = rep.irreducible;
    j["period"] = rep.irreducible ? Json(rep.period) : Json(nullptr);
    j["ergodic"] = rep.ergodic;
    o << j.dump() << '\n';
    return kOk;
  }

  // ---- verify -------------------------------------------------------------

  void setup_verify(CLI::App& app) {
    auto* cmd = app.add_subcommand("verify", "Run a property suite against a mean");
    cmd->configurable();
    cmd->add_option("--mean", mean_text_, "Mean descriptor")->required();
    cmd->add_option("--suite", suite_text_, "flags, extension, conjugacy or envelope")
        ->required()
        ->check(CLI::IsMember({"flags", "extension", "conjugacy", "envelope"}));
    cmd->add_option("--gen", gen_text_, "Generator for the conjugacy suite (default power:2)");
    cmd->add_option("--seed", seed_, "Random seed")->capture_default_str();
    cmd->add_option("--samples", samples_, "Samples per property")->capture_default_str();
    cmd->add_option("--tolerance", tolerance_, "Residual tolerance")->capture_default_str();
    add_iteration_options(cmd, common_);
    cmd->callback([this] { action_ = [this](std::ostream& o) { return verify(o); }; });
  }

  int verify(std::ostream& o) {
    const MeanDescriptor mean = parse_mean(mean_text_);
    SuiteOptions opts;
    opts.samples = samples_;
    opts.tolerance = tolerance_;
    opts.seed = seed_;
    opts.cfg = common_.config();
    if (!gen_text_.empty()) opts.gen = parse_generator(gen_text_);
    const SuiteReport rep = verify_suite(mean, parse_suite(suite_text_), opts);
    Json j;
    j["mean"] = rep.mean;
    j["suite"] = to_string(rep.suite);
    j["seed"] = seed_;
    j["passed"] = rep.passed();
    Json props = Json::array();
    for (const auto& p : rep.properties) {
      Json q;
      q["name"] = p.name;
      q["samples"] = p.samples;
      q["max_residual"] = p.max_residual;
      q["passed"] = p.passed;
      if (!p.witness.empty()) q["witness"] = p.witness;
      if (!p.note.empty()) q["note"] = p.note;
      props.push_back(std::move(q));
    }
    j["properties"] = std::move(props);
    o << j.dump() << '\n';
    return rep.passed() ? kOk : kCheckFailed;
  }

  // ---- gini-region ----------------------------------------------------------

  void setup_gini_region(CLI::App& app) {
    auto* cmd = app.add_subcommand("gini-region", "Comparison regions and extension check for two Gini means");
    cmd->configurable();
    cmd->add_option("--a", a_text_, "First parameter pair R,S")->required();
    cmd->add_option("--b", b_text_, "Second parameter pair R,S")->required();
    cmd->add_option("--trials", trials_, "Random points per arity inside Delta_2")
        ->capture_default_str();
    cmd->add_option("--seed", seed_, "Random seed")->capture_default_str();
    add_iteration_options(cmd, common_);
    cmd->callback([this] { action_ = [this](std::ostream& o) { return gini_region(o); }; });
  }

  int gini_region(std::ostream& o) {
    const GiniParams a = parse_pair(a_text_);
    const GiniParams b = parse_pair(b_text_);
    const RegionReport reg = region_report(a, b);
    const VerdictReport ver = corollary_check(a, b, trials_, seed_, common_.config());
    Json j;
    j["a"] = {a.r, a.s};
    j["b"] = {b.r, b.s};
    Json r;
    r["in_delta_inf"] = reg.in_delta_inf;
    r["in_delta_2"] = reg.in_delta_2;
    r["mon_g"] = {reg.mon_g_first, reg.mon_g_second};
    r["m_values"] = {reg.m_first, reg.m_second};
    r["mu_values"] = {reg.mu_first, reg.mu_second};
    r["boundary"] = reg.boundary;
    j["region"] = std::move(r);
    Json v;
    v["verdict"] = to_string(ver.verdict);
    v["in_delta_2"] = ver.in_delta_2;
    v["exploratory"] = ver.exploratory;
    v["comparisons"] = ver.comparisons;
    v["max_excess"] = ver.max_excess;
    v["witness"] = ver.witness;
    v["witness_values"] = {ver.witness_first, ver.witness_second};
    j["verdict"] = std::move(v);
    o << j.dump() << '\n';
    return ver.consistent() ? kOk : kCheckFailed;
  }

  // ---- gini-sweep -------------------------------------------------------------

  void setup_gini_sweep(CLI::App& app) {
    auto* cmd = app.add_subcommand("gini-sweep", "CSV of region membership of (p,q) against a fixed pair");
    cmd->configurable();
    cmd->add_option("--b", b_text_, "Fixed comparison pair R,S")->required();
    cmd->add_option("--min", sweep_min_, "Smallest swept parameter")->capture_default_str();
    cmd->add_option("--max", sweep_max_, "Largest swept parameter")->capture_default_str();
    cmd->add_option("--steps", sweep_steps_, "Grid points per axis")
        ->check(CLI::Range(2, 10001))
        ->capture_default_str();
    cmd->callback([this] { action_ = [this](std::ostream& o) { return gini_sweep(o); }; });
  }

  int gini_sweep(std::ostream& o) {
    if (!(sweep_min_ < sweep_max_)) throw std::invalid_argument("--min must be below --max");
    const GiniParams b = parse_pair(b_text_);
    o << "p,q,r,s,in_delta_inf,in_delta_2,mon_g_first,mon_g_second\n";
    const double step = (sweep_max_ - sweep_min_) / static_cast<double>(sweep_steps_ - 1);
    for (std::size_t i = 0; i < sweep_steps_; ++i) {
      for (std::size_t k = 0; k < sweep_steps_; ++k) {
        const GiniParams a{sweep_min_ + step * static_cast<double>(i),
                           sweep_min_ + step * static_cast<double>(k)};
        o << format_real(a.r) << ',' << format_real(a.s) << ',' << format_real(b.r) << ','
          << format_real(b.s) << ',' << in_delta_inf(a, b) << ',' << in_delta_2(a, b) << ','
          << in_mon_g(a) << ',' << in_mon_g(b) << '\n';
      }
    }
    return kOk;
  }

  // ---- envelope -----------------------------------------------------------------

  void setup_envelope(CLI::App& app) {
    auto* cmd = app.add_subcommand("envelope", "Power-family envelope estimate of a mean at x");
    cmd->configurable();
    cmd->add_option("--mean", mean_text_, "Mean descriptor")->required();
    cmd->add_option("--x", x_text_, "Comma-separated point")->required();
    cmd->add_option("--kind", kind_text_, "local_lower, local_upper, global_lower or global_upper")
        ->check(CLI::IsMember({"local_lower", "local_upper", "global_lower", "global_upper"}))
        ->capture_default_str();
    cmd->add_option("--rmin", window_.r_min, "Smallest exponent searched")->capture_default_str();
    cmd->add_option("--rmax", window_.r_max, "Largest exponent searched")->capture_default_str();
    cmd->add_option("--grid", window_.grid, "Exponents in the grid pass")->capture_default_str();
    cmd->add_option("--refine", window_.refine_tol, "Bisection tolerance in r")
        ->capture_default_str();
    cmd->add_option("--pmax", membership_.p_max, "Largest arity for global kinds")
        ->capture_default_str();
    cmd->add_option("--samples", membership_.samples, "Random points per arity")
        ->capture_default_str();
    cmd->add_option("--seed", seed_, "Random seed")->capture_default_str();
    add_iteration_options(cmd, common_);
    cmd->callback([this] { action_ = [this](std::ostream& o) { return envelope(o); }; });
  }

  int envelope(std::ostream& o) {
    const MeanDescriptor mean = parse_mean(mean_text_);
    const PointVector x(parse_reals(x_text_));
    MembershipOptions mo = membership_;
    mo.seed = seed_;
    const EnvelopeEstimate est =
        envelope_estimate(mean, x, parse_envelope_kind(kind_text_), window_, mo, common_.config());
    Json j;
    j["mean"] = to_string(mean);
    j["kind"] = to_string(est.kind);
    j["value"] = est.value;
    j["witness_r"] = nullable(est.witness_r);
    j["family_empty"] = est.family_empty;
    j["boundary_clamped"] = est.boundary_clamped;
    o << j.dump() << '\n';
    return kOk;
  }

  std::ostream& out_;
  std::ostream& err_;
  std::istream& in_;
  std::function<int(std::ostream&)> action_;
  std::string output_path_;

  Common common_;
  std::string mean_text_;
  std::string x_text_;
  bool shortcut_ = false;
  bool trace_ = false;
  std::string family_text_;
  std::string family_file_;
  std::string suite_text_;
  std::string gen_text_;
  std::uint64_t seed_ = 0;
  std::size_t samples_ = SuiteOptions{}.samples;
  double tolerance_ = SuiteOptions{}.tolerance;
  std::string a_text_;
  std::string b_text_;
  std::size_t trials_ = 50;
  double sweep_min_ = -3.0;
  double sweep_max_ = 3.0;
  std::size_t sweep_steps_ = 13;
  std::string kind_text_ = "local_lower";
  FamilyWindow window_;
  MembershipOptions membership_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  Runner runner(out, err, in);
  return runner.run(args);
}

}  // namespace meanx::cli
