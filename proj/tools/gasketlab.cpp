#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gasketlab/gasketlab.hpp"

using namespace gasketlab;

namespace {

bool verbose = false;
std::string command;

int emit(const CommandResult& r) {
  std::cout << r.out << std::flush;
  if (!r.err.empty()) std::cerr << r.err;
  if (verbose) {
    static const char* names[] = {"ok", "failed", "bad input", "out of scope"};
    std::cerr << command << ": " << (r.code >= 0 && r.code <= 3 ? names[r.code] : "?") << " (exit " << r.code
              << ", " << r.out.size() << " bytes, " << worker_count() << " workers)\n";
  }
  return r.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gasketlab: triangle gaskets, their automata and transducers"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_flag("-v,--verbose", verbose, "one-line summary on stderr");
  app.add_option("--threads", threads, "worker threads (default: GASKETLAB_THREADS or all cores)");

  std::string path, path_f, cert;

  auto* validate = app.add_subcommand("validate", "check a gasket spec and report its corners");
  validate->add_option("spec", path, "gasket spec JSON")->required();

  auto* automaton = app.add_subcommand("automaton", "topology automaton of a spec");
  automaton->add_option("spec", path, "gasket spec JSON")->required();

  auto* blocks = app.add_subcommand("blocks", "αβ-blocks and block profile");
  blocks->add_option("spec", path, "gasket spec JSON")->required();

  bool verify = false;
  auto* simplify = app.add_subcommand("simplify", "final simplification chain");
  simplify->add_option("input", path, "gasket spec or automaton JSON")->required();
  simplify->add_flag("--verify", verify, "audit every step");

  GmapOptions gm;
  auto* gmap = app.add_subcommand("gmap", "apply the map g (or its inverse) to a sequence");
  gmap->add_option("--params", gm.params, "tau,kappa,alpha,gamma")->required();
  gmap->add_option("--input", gm.input, "sequence such as 1.4.4.(2)^inf")->required();
  gmap->add_option("-n", gm.n, "alphabet size");
  gmap->add_flag("--mirror", gm.mirror, "βγ step (β in the α slot)");
  gmap->add_flag("--inverse", gm.inverse, "apply h = g^-1");
  gmap->add_flag("--decompose", gm.decompose, "print the segment factorization");

  std::size_t cert_depth = 3;
  auto* classify = app.add_subcommand("classify", "compare two gaskets");
  classify->add_option("e", path, "first spec")->required();
  classify->add_option("f", path_f, "second spec")->required();
  classify->add_option("--certificate", cert, "write the equivalence chain here");
  classify->add_option("--depth", cert_depth, "audit depth for the certificate");

  AuditOptions ao;
  auto* audit = app.add_subcommand("audit", "run audit suites on a spec");
  audit->add_option("spec", path, "gasket spec JSON")->required();
  audit->add_option("--suite", ao.suite, "metric|geometry|distortion|biholder|component|all");
  audit->add_option("--depth", ao.depth, "prefix length bound");
  audit->add_option("--refine", ao.refine, "extra cover depth for geometry");
  audit->add_option("--samples", ao.samples, "biholder pair samples, 0 = exhaustive");
  audit->add_flag("--force", ao.force, "ignore the enumeration caps");

  RenderCommandOptions ro;
  auto* render = app.add_subcommand("render", "SVG of the level-n triangle cover");
  render->add_option("spec", path, "gasket spec JSON")->required();
  render->add_option("--depth", ro.depth, "cover level");
  render->add_flag("--color-blocks", ro.color_blocks, "fill by αβ-block");
  render->add_option("--out", ro.out_path, "output file (default stdout)");
  render->add_flag("--force", ro.force, "ignore the enumeration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }
  if (threads > 0) set_worker_count(threads);
  command = app.get_subcommands().front()->get_name();

  if (*validate) return emit(cmd_validate(path));
  if (*automaton) return emit(cmd_automaton(path));
  if (*blocks) return emit(cmd_blocks(path));
  if (*simplify) return emit(cmd_simplify(path, verify));
  if (*gmap) return emit(cmd_gmap(gm));
  if (*classify) return emit(cmd_classify(path, path_f, cert, cert_depth));
  if (*audit) return emit(cmd_audit(path, ao));
  if (*render) return emit(cmd_render(path, ro));
  return kBadInput;
}
