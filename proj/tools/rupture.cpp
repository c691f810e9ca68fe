// rupture: command-line front end for the rupture-kit kernel.

#include <iostream>

#include <CLI11.hpp>

#include "rupture/cli.hpp"

namespace {

std::vector<rupture::Index> parse_edge_list(const std::string& s) {
  std::vector<rupture::Index> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw CLI::ValidationError("--path", "expected comma-separated edge indices, got '" + s + "'");
    out.push_back(std::stoul(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rupture::cli;
  CLI::App app{"rupture: ruptured simplicial sets, fibrations, and gap witnesses"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  std::string file, file2;
  std::size_t dim = 0, missing = 0, max_dim = 2;
  rupture::Index term = 0;
  std::string path;

  auto* validate = app.add_subcommand("validate", "validate any document");
  validate->add_option("file", file)->required();

  auto* horns = app.add_subcommand("horns", "enumerate and classify horns");
  horns->add_option("file", file)->required();
  horns->add_option("--dim", dim, "horn dimension n")->required();
  horns->add_option("--missing", missing, "omitted face k")->required();

  auto* kan = app.add_subcommand("kan", "check the Kan condition up to a dimension");
  kan->add_option("file", file)->required();
  kan->add_option("--max-dim", max_dim, "highest horn dimension checked");

  auto* tr = app.add_subcommand("transport", "transport a vertex along base edges");
  tr->add_option("file", file)->required();
  tr->add_option("--term", term, "total-space vertex")->required();
  tr->add_option("--path", path, "base edge, or comma-separated edges")->required();

  auto* mono = app.add_subcommand("monodromy", "monodromy of a covering along loops");
  mono->add_option("fibration", file)->required();
  mono->add_option("task", file2)->required();

  auto* core = app.add_subcommand("core", "coherent core of a ruptured complex");
  core->add_option("file", file)->required();

  auto* prod = app.add_subcommand("product", "product of two ruptured complexes");
  prod->add_option("first", file)->required();
  prod->add_option("second", file2)->required();

  auto* comp = app.add_subcommand("compose", "compose fibrations F: E -> B and G: B -> A");
  comp->add_option("first", file)->required();
  comp->add_option("second", file2)->required();

  auto* derive = app.add_subcommand("derive", "resource derivability and derivability horns");
  derive->add_option("task", file)->required();

  auto* judg = app.add_subcommand("judgments", "replay a judgment script");
  judg->add_option("script", file)->required();

  auto* fmt = app.add_subcommand("format", "re-serialize a document canonically");
  fmt->add_option("file", file)->required();

  for (auto* sub : app.get_subcommands({})) sub->add_flag("--json", as_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kFinding;
  }

  CliResult res;
  try {
    if (*validate) res = cmd_validate(file, as_json);
    else if (*horns) res = cmd_horns(file, dim, missing, as_json);
    else if (*kan) res = cmd_kan(file, max_dim, as_json);
    else if (*tr) res = cmd_transport(file, term, parse_edge_list(path), as_json);
    else if (*mono) res = cmd_monodromy(file, file2, as_json);
    else if (*core) res = cmd_core(file, as_json);
    else if (*prod) res = cmd_product(file, file2, as_json);
    else if (*comp) res = cmd_compose(file, file2, as_json);
    else if (*derive) res = cmd_derive(file, as_json);
    else if (*judg) res = cmd_judgments(file, as_json);
    else if (*fmt) res = cmd_format(file);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kFinding;
  }
  std::cout << res.out;
  std::cerr << res.err;
  return res.code;
}
