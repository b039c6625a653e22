#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bap/affine.hpp"
#include "bap/classes.hpp"
#include "bap/counting.hpp"
#include "bap/perm.hpp"
#include "bap/schema.hpp"

namespace {

using nlohmann::json;

enum class Format { plain, csv, json_doc };

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Exact scalar when available, shortest double otherwise.
std::string fmt_scalar(const std::optional<mpq_class>& exact, double v) {
  return exact ? exact->get_str() : fmt_double(v);
}

struct Options {
  Format format = Format::plain;
  int cap = bap::kDefaultBruteCap;
};

void print_sequence(const Options& opt, const std::string& name,
                    const std::vector<std::pair<int, std::string>>& rows) {
  switch (opt.format) {
    case Format::plain:
      for (const auto& [n, v] : rows) std::cout << v << "\n";
      break;
    case Format::csv:
      std::cout << "n," << name << "\n";
      for (const auto& [n, v] : rows) std::cout << n << "," << v << "\n";
      break;
    case Format::json_doc: {
      json doc;
      doc["name"] = name;
      json arr = json::array();
      for (const auto& [n, v] : rows) arr.push_back({{"n", n}, {"value", v}});
      doc["sequence"] = arr;
      std::cout << doc.dump() << "\n";
      break;
    }
  }
}

void print_pairs(const Options& opt, const std::vector<std::pair<std::string, std::string>>& kv) {
  switch (opt.format) {
    case Format::plain: {
      bool first = true;
      for (const auto& [k, v] : kv) {
        if (!first) std::cout << ' ';
        std::cout << k << '=' << v;
        first = false;
      }
      std::cout << "\n";
      break;
    }
    case Format::csv:
      std::cout << "key,value\n";
      for (const auto& [k, v] : kv) std::cout << k << "," << v << "\n";
      break;
    case Format::json_doc: {
      json doc;
      for (const auto& [k, v] : kv) doc[k] = v;
      std::cout << doc.dump() << "\n";
      break;
    }
  }
}

void print_diagnostics(const Options& opt, const bap::DiagnosticsReport& rep) {
  switch (opt.format) {
    case Format::plain:
      std::cout << "report=" << rep.title << "\n";
      for (const auto& s : rep.sequences) {
        std::cout << "sequence=" << s.name << " target=" << fmt_double(s.target)
                  << " final_dev=" << fmt_double(s.final_deviation)
                  << " nonincreasing=" << (s.deviations_nonincreasing ? "yes" : "no") << "\n";
        for (const auto& [n, v] : s.samples) {
          std::cout << "  n=" << n << " value=" << fmt_double(v) << "\n";
        }
      }
      break;
    case Format::csv:
      std::cout << "sequence,n,value,target\n";
      for (const auto& s : rep.sequences) {
        for (const auto& [n, v] : s.samples) {
          std::cout << s.name << "," << n << "," << fmt_double(v) << "," << fmt_double(s.target)
                    << "\n";
        }
      }
      break;
    case Format::json_doc: {
      json doc;
      doc["title"] = rep.title;
      json seqs = json::array();
      for (const auto& s : rep.sequences) {
        json samples = json::array();
        for (const auto& [n, v] : s.samples) samples.push_back({{"n", n}, {"value", v}});
        seqs.push_back({{"name", s.name},
                        {"target", s.target},
                        {"final_deviation", s.final_deviation},
                        {"nonincreasing", s.deviations_nonincreasing},
                        {"samples", samples}});
      }
      doc["sequences"] = seqs;
      std::cout << doc.dump() << "\n";
      break;
    }
  }
}

std::vector<bap::Perm> parse_patterns(const std::string& spec) {
  std::vector<bap::Perm> patterns;
  size_t start = 0;
  while (start <= spec.size()) {
    size_t end = spec.find(',', start);
    if (end == std::string::npos) end = spec.size();
    patterns.push_back(bap::Perm::parse(spec.substr(start, end - start)));
    start = end + 1;
    if (end == spec.size()) break;
  }
  return patterns;
}

bap::ClassSpec resolve_class(const std::string& name) {
  if (name.rfind("file:", 0) == 0) return bap::ClassSpec::from_file(name.substr(5));
  return bap::ClassSpec::builtin(name);
}

mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("invalid rational '" + text + "'");
  q.canonicalize();
  return q;
}

int run(int argc, char** argv) {
  CLI::App app{"exact enumeration and pattern tools for bounded affine permutations"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Options opt;
  std::string format_name = "plain";
  app.add_option("--format", format_name, "plain, csv or json")
      ->check(CLI::IsMember({"plain", "csv", "json"}));
  app.add_option("--cap", opt.cap, "override the brute-force size cap");

  // count
  auto* count = app.add_subcommand("count", "exact counts");
  count->require_subcommand(1);
  count->fallthrough();

  auto* count_ba = count->add_subcommand("bounded-affine", "count bounded affine permutations");
  count_ba->fallthrough();
  int ba_n = 0, ba_upto = 0;
  std::string ba_method = "both";
  auto* ba_n_opt = count_ba->add_option("--n", ba_n, "single size");
  auto* ba_upto_opt = count_ba->add_option("--upto", ba_upto, "sizes 1..N");
  count_ba->add_option("--method", ba_method, "a, b or brute")
      ->check(CLI::IsMember({"a", "b", "brute", "both"}));
  ba_n_opt->excludes(ba_upto_opt);

  auto* count_av = count->add_subcommand("avoiders", "count pattern avoiders");
  count_av->fallthrough();
  int av_n = 0, av_upto = 0;
  std::string av_patterns, av_universe = "bounded-affine";
  auto* av_n_opt = count_av->add_option("--n", av_n, "single size");
  auto* av_upto_opt = count_av->add_option("--upto", av_upto, "sizes 1..N");
  count_av->add_option("--patterns", av_patterns, "comma-separated patterns")->required();
  count_av->add_option("--universe", av_universe, "bounded-affine or ordinary")
      ->check(CLI::IsMember({"bounded-affine", "ordinary"}));
  av_n_opt->excludes(av_upto_opt);

  // decompose
  auto* decompose = app.add_subcommand("decompose", "decompose an affine permutation");
  decompose->fallthrough();
  std::string dc_window, dc_mode = "std";
  int dc_size = -1;
  decompose->add_option("--window", dc_window, "window entries, comma-separated")->required();
  decompose->add_option("--size", dc_size, "declared size; must match the entry count");
  decompose->add_option("--mode", dc_mode, "std or blocks")->check(CLI::IsMember({"std", "blocks"}));

  // series
  auto* series = app.add_subcommand("series", "generating-function tools");
  series->require_subcommand(1);
  series->fallthrough();

  auto* se_affine = series->add_subcommand("affine", "counts of shifted infinite sums");
  se_affine->fallthrough();
  std::string af_class;
  int af_terms = 0;
  se_affine->add_option("--class", af_class, "built-in name or file:<path>")->required();
  se_affine->add_option("--terms", af_terms, "number of terms")->required();

  auto* se_classify = series->add_subcommand("classify", "schema classification");
  se_classify->fallthrough();
  std::string cl_class, cl_tolerance = "1/1000";
  int cl_terms = 0;
  se_classify->add_option("--class", cl_class, "built-in name or file:<path>")->required();
  se_classify->add_option("--terms", cl_terms, "number of terms")->required();
  se_classify->add_option("--tolerance", cl_tolerance, "criticality tolerance, rational");

  auto* se_diagnose = series->add_subcommand("diagnose", "limit diagnostics");
  se_diagnose->fallthrough();
  std::string dg_target, dg_class;
  int dg_terms = 0;
  se_diagnose->add_option("--target", dg_target, "enasym, subcritical or supercritical")
      ->required()
      ->check(CLI::IsMember({"enasym", "subcritical", "supercritical"}));
  se_diagnose->add_option("--class", dg_class, "class for subcritical/supercritical targets");
  se_diagnose->add_option("--terms", dg_terms, "number of terms")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (format_name == "csv") opt.format = Format::csv;
  if (format_name == "json") opt.format = Format::json_doc;
  if (opt.cap != bap::kDefaultBruteCap) {
    std::cerr << "warning: brute-force cap overridden to " << opt.cap << "\n";
  }

  if (count_ba->parsed()) {
    if (ba_n_opt->count() == 0 && ba_upto_opt->count() == 0) {
      throw std::invalid_argument("one of --n or --upto is required");
    }
    const int lo = ba_upto_opt->count() ? 1 : ba_n;
    const int hi = ba_upto_opt->count() ? ba_upto : ba_n;
    std::vector<std::pair<int, std::string>> rows;
    for (int n = lo; n <= hi; ++n) {
      mpz_class value;
      if (ba_method == "a") {
        value = bap::count_bounded_affine(n, bap::CountMethod::formula_a);
      } else if (ba_method == "b") {
        value = bap::count_bounded_affine(n, bap::CountMethod::formula_b);
      } else if (ba_method == "brute") {
        value = bap::count_bounded_affine(n, bap::CountMethod::brute, opt.cap);
      } else {
        value = bap::count_bounded_affine(n, bap::CountMethod::formula_a);
        const mpz_class check = bap::count_bounded_affine(n, bap::CountMethod::formula_b);
        if (value != check) throw std::logic_error("count formulas disagree at n=" + std::to_string(n));
      }
      rows.emplace_back(n, value.get_str());
    }
    print_sequence(opt, "bounded_affine_count", rows);
    return 0;
  }

  if (count_av->parsed()) {
    if (av_n_opt->count() == 0 && av_upto_opt->count() == 0) {
      throw std::invalid_argument("one of --n or --upto is required");
    }
    const auto patterns = parse_patterns(av_patterns);
    const int lo = av_upto_opt->count() ? 1 : av_n;
    const int hi = av_upto_opt->count() ? av_upto : av_n;
    std::vector<std::pair<int, std::string>> rows;
    for (int n = lo; n <= hi; ++n) {
      mpz_class value;
      if (av_universe == "ordinary") {
        if (n < 0) throw std::invalid_argument("size must be non-negative");
        value = 0;
        bap::for_each_avoider(n, patterns, [&](const bap::Perm&) {
          ++value;
          return true;
        });
      } else {
        value = bap::count_bounded_avoiders(n, patterns, opt.cap);
      }
      rows.emplace_back(n, value.get_str());
    }
    print_sequence(opt, "avoider_count", rows);
    return 0;
  }

  if (decompose->parsed()) {
    const bap::AffinePerm w = bap::AffinePerm::parse(dc_window);
    if (dc_size >= 0 && dc_size != w.size()) {
      throw std::invalid_argument("declared size " + std::to_string(dc_size) +
                                  " differs from the window length " + std::to_string(w.size()));
    }
    if (dc_mode == "std") {
      const bap::StdDecomposition d = bap::standard_decomposition(w);
      std::string word;
      for (size_t i = 0; i < d.word.size(); ++i) {
        if (i) word += ',';
        word += std::to_string(d.word[i]);
      }
      print_pairs(opt, {{"flat", d.flat.str()}, {"word", word}});
    } else {
      if (auto dec = bap::is_decomposable(w)) {
        if (opt.format == Format::plain) {
          std::cout << "decomposable r=" << dec->shift_amount << " pi=" << dec->block_pattern.str()
                    << "\n";
        } else {
          print_pairs(opt, {{"status", "decomposable"},
                            {"r", std::to_string(dec->shift_amount)},
                            {"pi", dec->block_pattern.str()}});
        }
      } else {
        int witness = 0;  // largest oscillation size confirmed in the bounded search
        for (int k = 3; k <= w.size() + 2; ++k) {
          for (const bap::Perm& osc : bap::finite_oscillations(k)) {
            if (bap::contains_finite_pattern(w, osc)) witness = std::max(witness, k);
          }
        }
        if (opt.format == Format::plain) {
          std::cout << "indecomposable osc_witness_size=" << witness << "\n";
        } else {
          print_pairs(opt, {{"status", "indecomposable"},
                            {"osc_witness_size", std::to_string(witness)}});
        }
      }
    }
    return 0;
  }

  if (se_affine->parsed()) {
    if (af_terms < 1) throw std::invalid_argument("--terms must be positive");
    const bap::Series s = resolve_class(af_class).affine_series(af_terms);
    std::vector<std::pair<int, std::string>> rows;
    for (int n = 1; n <= af_terms; ++n) rows.emplace_back(n, mpq_class(s[n]).get_str());
    print_sequence(opt, "affine_count", rows);
    return 0;
  }

  if (se_classify->parsed()) {
    const bap::SchemaReport rep =
        bap::schema_classify(resolve_class(cl_class), cl_terms, parse_rational(cl_tolerance));
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("class", rep.class_name);
    kv.emplace_back("classification", rep.label());
    kv.emplace_back("tau", fmt_scalar(rep.tau_exact, rep.tau));
    kv.emplace_back("r", fmt_scalar(rep.radius_exact, rep.radius));
    if (rep.rho) kv.emplace_back("rho", fmt_scalar(rep.rho_exact, *rep.rho));
    if (rep.alpha) kv.emplace_back("alpha", fmt_scalar(rep.alpha_exact, *rep.alpha));
    if (rep.beta) kv.emplace_back("beta", fmt_scalar(rep.beta_exact, *rep.beta));
    if (!rep.g_nonnegative) kv.emplace_back("g_nonnegative", "no");
    kv.emplace_back("exact", rep.exact ? "yes" : "no");
    kv.emplace_back("terms", std::to_string(rep.terms));
    kv.emplace_back("tolerance", fmt_double(rep.tolerance));
    print_pairs(opt, kv);
    return 0;
  }

  if (se_diagnose->parsed()) {
    bap::DiagnosticsReport rep;
    if (dg_target == "enasym") {
      rep = bap::bounded_total_diagnostics(dg_terms);
    } else {
      if (dg_class.empty()) throw std::invalid_argument("--class is required for this target");
      const bap::ClassSpec cls = resolve_class(dg_class);
      rep = dg_target == "subcritical" ? bap::subcritical_diagnostics(cls, dg_terms)
                                       : bap::supercritical_diagnostics(cls, dg_terms);
    }
    print_diagnostics(opt, rep);
    return 0;
  }

  throw std::invalid_argument("no subcommand given");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
