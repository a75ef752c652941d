// fgdesc: construct short first-order sentences describing finite groups and
// verify them by model checking against complete same-order catalogs.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "fgdesc/catalog.hpp"
#include "fgdesc/json_io.hpp"
#include "fgdesc/pipeline.hpp"
#include "fgdesc/sexpr.hpp"
#include "fgdesc/verify.hpp"

namespace fs = std::filesystem;
using namespace fgdesc;

namespace {

int cmd_describe(const std::string& input, const std::string& mode,
                 const std::string& pres_name, const std::string& out_dir,
                 bool slp_dumps) {
  FiniteGroup g = group_from_json(read_file(input));
  DescriptionResult res = [&] {
    if (mode == "full") return describe_group(g);
    if (mode == "sigma") return describe_sigma_bounded(g);
    if (mode == "presentation") {
      const PresentationSpec* pres =
          PresentationCatalog::shipped().by_name(pres_name);
      if (!pres) throw std::invalid_argument("no shipped presentation named '" +
                                             pres_name + "'");
      return describe_via_presentation(g, *pres);
    }
    throw std::invalid_argument("mode must be full, sigma, or presentation");
  }();
  fs::create_directories(out_dir);
  write_file(out_dir + "/formula.sexp",
             fo::render_file(fo::group_sig(), res.formula));
  write_file(out_dir + "/formula.tags.json", fo::tags_to_json(res.formula));
  write_file(out_dir + "/metrics.json", res.provenance_json());
  if (slp_dumps && g.order() > 1) {
    CompositionSeries series = composition_series(g);
    std::vector<std::vector<int>> gensets(series.gensets.begin() + 1,
                                          series.gensets.end());
    PreprocessingChain chain = preprocessing_chain(g, gensets);
    write_file(out_dir + "/chain.slp", chain.slp.dump());
  }
  std::cout << "wrote " << out_dir << " (symbol length "
            << res.metrics.symbol_length << ", " << res.metrics.alternation.str()
            << ")\n";
  return 0;
}

int cmd_verify(const std::string& sentence_path, const std::string& group_path,
               int catalog_order, const std::string& tags_path) {
  FiniteGroup g = group_from_json(read_file(group_path));
  fo::FormulaFile file = fo::parse_file_text(read_file(sentence_path));
  fo::FormulaP phi = file.formula;
  if (!tags_path.empty())
    phi = fo::apply_tags_json(phi, read_file(tags_path), *file.sig);
  auto catalog = enumerate_groups(catalog_order);
  VerificationReport rep = verify_describes(phi, g, *catalog);
  std::cout << rep.to_json() << "\n";
  if (rep.verdict == "describes") return 0;
  if (rep.verdict == "fails") return 1;
  return 2;
}

int cmd_catalog(int order, const std::string& emit_dir) {
  auto catalog = enumerate_groups(order);
  std::cout << "order " << order << ": " << catalog->groups.size()
            << " groups, complete=" << (catalog->complete ? "yes" : "no") << "\n";
  for (const FiniteGroup& g : catalog->groups) std::cout << "  " << g.label() << "\n";
  if (!emit_dir.empty()) {
    fs::create_directories(emit_dir);
    int i = 0;
    for (const FiniteGroup& g : catalog->groups)
      write_file(emit_dir + "/group" + std::to_string(++i) + ".json",
                 group_to_json(g));
  }
  return 0;
}

int cmd_eval(const std::string& formula_path, const std::string& structure_path) {
  fo::FormulaFile file = fo::parse_file_text(read_file(formula_path));
  auto structure = structure_from_json(read_file(structure_path));
  fo::Evaluator ev(*structure, {fo::EvalOptions::Mode::Shortcut});
  bool result = ev.evaluate(file.formula);
  std::cout << (result ? "true" : "false") << "\n";
  return result ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"short first-order descriptions of finite groups"};
  app.require_subcommand(1);

  auto* describe = app.add_subcommand("describe", "build a description bundle");
  std::string input, mode = "full", pres_name, out_dir = "bundle";
  bool slp_dumps = false;
  describe->add_option("--input", input, "group json")->required();
  describe->add_option("--mode", mode, "full|sigma|presentation");
  describe->add_option("--presentation", pres_name, "catalog presentation name");
  describe->add_option("--out", out_dir, "output directory");
  describe->add_flag("--slp-dumps", slp_dumps, "dump the preprocessing SLP");

  auto* verify = app.add_subcommand("verify", "certify a sentence against a catalog");
  std::string sentence, group_path, tags_path;
  int catalog_order = 0;
  verify->add_option("--sentence", sentence, "formula file")->required();
  verify->add_option("--group", group_path, "target group json")->required();
  verify->add_option("--catalog-order", catalog_order, "candidate order")->required();
  verify->add_option("--tags", tags_path, "shortcut tags json");

  auto* catalog_cmd = app.add_subcommand("catalog", "list or emit a catalog");
  int order = 0;
  std::string emit_dir;
  catalog_cmd->add_option("--order", order, "group order")->required();
  catalog_cmd->add_option("--emit", emit_dir, "directory for group json files");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula on a structure");
  std::string formula_path, structure_path;
  eval_cmd->add_option("--formula", formula_path, "formula file")->required();
  eval_cmd->add_option("--structure", structure_path, "structure json")->required();

  auto* scaling = app.add_subcommand("scaling", "length-scaling CSV");
  std::string family = "cyclic-2k", csv_path;
  int max_k = 12;
  scaling->add_option("--family", family,
                      "cyclic-2k|elementary-abelian-2|dihedral|symmetric");
  scaling->add_option("--max-k", max_k, "family size parameter");
  scaling->add_option("--csv", csv_path, "output path (default stdout)");

  auto* bound = app.add_subcommand("bound", "counting lower bounds");
  std::string kind = "groups-p-n";
  long long p = 2, q = 2;
  int n = 9;
  bound->add_option("--kind", kind, "groups-p-n|graphs|prime-fields");
  bound->add_option("-p", p, "prime (groups-p-n)");
  bound->add_option("-n", n, "size parameter");
  bound->add_option("-q", q, "field size (prime-fields)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (describe->parsed())
      return cmd_describe(input, mode, pres_name, out_dir, slp_dumps);
    if (verify->parsed())
      return cmd_verify(sentence, group_path, catalog_order, tags_path);
    if (catalog_cmd->parsed()) return cmd_catalog(order, emit_dir);
    if (eval_cmd->parsed()) return cmd_eval(formula_path, structure_path);
    if (scaling->parsed()) {
      std::string csv = scaling_report(family, max_k);
      if (csv_path.empty()) std::cout << csv;
      else write_file(csv_path, csv);
      return 0;
    }
    if (bound->parsed()) {
      long long bits = kind == "groups-p-n" ? lower_bound_bits_groups(p, n)
                       : kind == "graphs"   ? lower_bound_bits_graphs(n)
                                            : lower_bound_bits_prime_fields(q);
      std::cout << bits << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
