#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "sumprod/sumprod.hpp"

using namespace sumprod;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t max_n = SIZE_MAX;
  std::string out;
  std::string format = "json";
  std::string constant_c = "1";
  std::string eps;
  std::string log_base = "2";
};

harness::CheckParams params_of(const Globals& g) {
  harness::CheckParams p;
  p.c = Rational::parse(g.constant_c);
  if (!g.eps.empty()) p.eps = Rational::parse(g.eps);
  p.base = g.log_base == "e" ? LogBase::e : LogBase::two;
  p.seed = g.seed;
  return p;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) fail(errc::parse_error, "cannot write " + g.out);
  f << text;
}

void emit_json(const Globals& g, const json& j) { emit(g, j.dump(2) + "\n"); }

/// Inline JSON (object or array) or a path to a JSON file.
json load_spec(const std::string& arg) {
  json j;
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    try {
      j = json::parse(arg);
    } catch (const json::exception& e) {
      fail(errc::parse_error, e.what());
    }
  } else {
    j = read_json_file(arg);
  }
  if (j.is_array()) j = json{{"elements", j}};
  return j;
}

/// Generator spec from --generator and key=value --param pairs.
json spec_from_parts(const std::string& generator, const std::vector<std::string>& kv) {
  json p = json::object();
  for (const auto& s : kv) {
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(errc::parse_error, "--param expects key=value, got '" + s + "'");
    std::string k = s.substr(0, eq), v = s.substr(eq + 1);
    if (k == "gaps") {
      json arr = json::array();
      std::stringstream ss(v);
      for (std::string x; std::getline(ss, x, ',');) arr.push_back(x);
      p[k] = arr;
    } else if (k == "n" || k == "e" || k == "range") {
      p[k] = std::stoll(v);
    } else if (k == "seed") {
      p[k] = std::stoull(v);
    } else {
      p[k] = v;
    }
  }
  return {{"generator", generator}, {"params", p}};
}

json compute(const RSet& a, const std::vector<std::string>& what) {
  auto want = [&](const std::string& k) { return what.empty() || std::find(what.begin(), what.end(), k) != what.end(); };
  json out;
  out["size"] = a.size();
  if (want("sumset")) out["sumset_size"] = sumset(a, a).size();
  if (want("difference_set")) out["difference_set_size"] = diffset(a, a).size();
  if (want("additive_energy")) out["additive_energy"] = additive_energy(a).get_str();
  if (want("cubic_energy")) out["cubic_energy"] = cubic_energy(a).get_str();
  if (!a.contains_zero()) {
    if (want("product_set")) out["product_set_size"] = prodset(a, a).size();
    if (want("ratio_set")) out["ratio_set_size"] = ratioset(a, a).size();
    if (want("mult_energy")) out["mult_energy"] = mult_energy(a).get_str();
  }
  if (want("aa_plus_aa") && a.is_positive() && a.size() <= aa_plus_aa_gate)
    out["aa_plus_aa_size"] = aa_plus_aa(a).aa_plus_aa.size();
  if (want("convex")) out["is_convex"] = a.size() >= 3 && is_convex(a);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string reports_csv(const json& bundle) {
  std::ostringstream o;
  o << "check,label,n,content_hash,lhs,relation,rhs,ratio,verdict\n";
  for (const auto& r : bundle.at("reports")) {
    const auto& s = r.at("set");
    o << r.at("check").get<std::string>() << "," << csv_field(s.value("label", std::string())) << "," << s.value("size", 0) << ","
      << s.value("content_hash", std::string()) << "," << r.at("lhs").value("decimal", std::string()) << ","
      << r.value("relation", std::string()) << "," << r.at("rhs").value("decimal", std::string()) << ","
      << r.value("ratio", std::string()) << "," << r.value("verdict", std::string()) << "\n";
  }
  return o.str();
}

std::string summary_text(const json& bundle) {
  std::ostringstream o;
  const auto& s = bundle.at("summary");
  o << "corpus " << bundle.value("corpus", std::string()) << ": " << s.at("reports") << " reports, " << s.at("pass")
    << " pass, " << s.at("fail") << " fail, " << s.at("report_only") << " report-only, " << s.at("errors")
    << " errors\n";
  for (const auto& r : bundle.at("reports"))
    if (r.value("verdict", std::string()) == "fail")
      o << "FAIL " << r.at("check").get<std::string>() << " on " << r.at("set").value("label", std::string()) << "\n";
  return o.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sumprodlab: exact sum-product experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "seed for randomised steps")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--max-n", g.max_n, "skip sets larger than this");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--constant-C", g.constant_c, "bunch-size constant C (rational)");
  app.add_option("--eps", g.eps, "regularisation epsilon (rational)");
  app.add_option("--log-base", g.log_base, "base of log factors")->check(CLI::IsMember({"2", "e"}));

  std::string set_arg, generator, corpus_path, checks = "all", range, family_arg, bundle_path, which = "bunching";
  std::vector<std::string> params, quantities;
  bool no_cache = false, summary = false;

  auto* gen_cmd = app.add_subcommand("gen", "materialise a set from a generator spec");
  gen_cmd->add_option("--set", set_arg, "JSON spec, inline or as a file");
  gen_cmd->add_option("--generator", generator, "interval, ap, gp, convex_power, convex_from_gaps, random_subset");
  gen_cmd->add_option("--param", params, "key=value generator parameter");

  auto* compute_cmd = app.add_subcommand("compute", "set sizes and energies");
  compute_cmd->add_option("--set", set_arg, "JSON spec, inline or as a file");
  compute_cmd->add_option("--generator", generator, "generator name");
  compute_cmd->add_option("--param", params, "key=value generator parameter");
  compute_cmd->add_option("--what", quantities, "subset of quantities to compute");

  auto* check_cmd = app.add_subcommand("check", "run registry checks on a corpus or a single set");
  check_cmd->add_option("--corpus", corpus_path, "corpus JSON file");
  check_cmd->add_option("--set", set_arg, "single set spec instead of a corpus");
  check_cmd->add_option("--checks", checks, "comma-separated check ids, or all");
  check_cmd->add_flag("--no-cache", no_cache, "ignore and do not write the cache");
  check_cmd->add_flag("--summary", summary, "print a one-line summary to stderr");
  bool list = false;
  check_cmd->add_flag("--list", list, "list registered checks and exit");

  auto* pipe_cmd = app.add_subcommand("pipeline", "run one of the multi-step flows on a set");
  pipe_cmd->add_option("--set", set_arg, "JSON spec, inline or as a file")->required();
  pipe_cmd->add_option("--flow", which, "bunching, aa_plus_aa or sumset")
      ->check(CLI::IsMember({"bunching", "aa_plus_aa", "sumset"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "CSV table of sizes and observed exponents over n");
  sweep_cmd->add_option("--family", family_arg, "generator spec without n, inline or as a file");
  sweep_cmd->add_option("--generator", generator, "generator name");
  sweep_cmd->add_option("--param", params, "key=value generator parameter");
  sweep_cmd->add_option("--n", range, "a..b, a..b:x2, a..b:+k or a,b,c");
  sweep_cmd->add_option("--check", checks, "exponent, sumset, or a registry check id");

  auto* report_cmd = app.add_subcommand("report", "render a stored report bundle");
  report_cmd->add_option("bundle", bundle_path, "bundle JSON written by check")->required();

  auto* derive_cmd = app.add_subcommand("derive", "replay an exponent derivation file");
  derive_cmd->add_option("file", bundle_path, "derivation JSON")->required();

  auto* purge_cmd = app.add_subcommand("purge-cache", "delete cached results");

  CLI11_PARSE(app, argc, argv);

  try {
    auto the_set = [&]() -> SetSpec {
      if (!set_arg.empty()) return realise(load_spec(set_arg));
      if (!generator.empty()) return realise(spec_from_parts(generator, params));
      fail(errc::parse_error, "need --set or --generator");
    };

    if (*gen_cmd) {
      auto s = the_set();
      json out = s.descriptor;
      out["elements"] = to_json(s.set);
      emit_json(g, out);
      return 0;
    }
    if (*compute_cmd) {
      auto s = the_set();
      if (s.set.size() > g.max_n) fail(errc::gate_violation, "set above --max-n");
      json out{{"set", s.descriptor}, {"values", compute(s.set, quantities)}};
      emit_json(g, out);
      return 0;
    }
    if (*check_cmd) {
      if (list) {
        std::ostringstream o;
        for (const auto& c : harness::CheckRegistry::standard().checks())
          o << c.id << (c.asserted ? "  [asserted]  " : "  [report-only]  ") << c.statement << "\n";
        emit(g, o.str());
        return 0;
      }
      harness::Corpus corpus;
      if (!corpus_path.empty()) {
        corpus = harness::load_corpus(corpus_path);
      } else if (!set_arg.empty()) {
        corpus = harness::parse_corpus(json{{"name", "single"}, {"items", json::array({load_spec(set_arg)})}});
      } else {
        fail(errc::parse_error, "need --corpus or --set");
      }
      harness::RunOptions opt;
      opt.checks = checks;
      opt.jobs = g.jobs;
      opt.max_n = g.max_n;
      opt.params = params_of(g);
      opt.use_cache = !no_cache;
      auto res = harness::run(corpus, opt);
      if (g.format == "csv") emit(g, reports_csv(res.bundle));
      else emit_json(g, res.bundle);
      if (summary) std::cerr << summary_text(res.bundle);
      return res.exit_code();
    }
    if (*pipe_cmd) {
      auto s = the_set();
      const auto p = params_of(g);
      std::vector<InequalityReport> reports;
      json extra;
      if (which == "bunching") {
        auto r = bunching_pipeline(s.set, p.c, p.base);
        reports = r.reports;
        extra = r.summary;
        extra["status"] = r.status;
      } else if (which == "aa_plus_aa") {
        reports = {aa_plus_aa_slope_report(s.set, p.c), aa_plus_aa_energy_report(s.set, p.base)};
      } else {
        auto cover = standard_product_cover(s.set);
        reports = {regularised_sumset_report(s.set, cover.p1, cover.p2, cover.t, SumsetBranch::general, p.base)};
        if (s.set.size() >= 3 && is_convex(s.set))
          reports.push_back(regularised_sumset_report(s.set, s.set, s.set, s.set.size(), SumsetBranch::convex, p.base));
      }
      json arr = json::array();
      for (auto& r : reports) {
        r.set = s.descriptor;
        arr.push_back(to_json(r));
      }
      emit_json(g, json{{"schema_version", harness::schema_version}, {"flow", which}, {"summary", extra}, {"reports", arr}});
      bool failed = std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.failed(); });
      return failed ? 1 : 0;
    }
    if (*sweep_cmd) {
      json family;
      if (!family_arg.empty()) family = load_spec(family_arg);
      else if (!generator.empty()) family = spec_from_parts(generator, params);
      else fail(errc::parse_error, "need --family or --generator");
      emit(g, harness::sweep(family, harness::parse_range(range), checks == "all" ? "exponent" : checks, params_of(g)));
      return 0;
    }
    if (*report_cmd) {
      auto bundle = read_json_file(bundle_path);
      if (bundle.value("schema_version", 0) != harness::schema_version) fail(errc::parse_error, "unsupported schema_version");
      if (g.format == "csv") emit(g, reports_csv(bundle));
      else emit(g, summary_text(bundle));
      return bundle.at("summary").at("fail").get<std::size_t>() ? 1 : 0;
    }
    if (*derive_cmd) {
      auto d = exponents::run_derivation_file(bundle_path);
      emit_json(g, exponents::to_json(d));
      return d.all_expectations_hold() ? 0 : 1;
    }
    if (*purge_cmd) {
      harness::Cache c(harness::Cache::default_dir());
      std::cout << "removed " << c.purge() << " entries from " << c.dir().string() << "\n";
      return 0;
    }
  } catch (const error& e) {
    std::cerr << "sumprodlab: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
