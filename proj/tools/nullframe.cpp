#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nullframe/error.hpp"
#include "nullframe/manifest.hpp"
#include "nullframe/parallel.hpp"
#include "nullframe/report.hpp"

using namespace nullframe;

namespace {

enum Exit { kPass = 0, kInput = 1, kFailure = 2, kSignature = 3 };

void write_json(const json& doc, const std::string& path) {
  std::string text = doc.dump(2) + "\n";
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path + ": cannot open for writing");
  out << text;
  if (!out) throw ValidationError(path + ": write failed");
}

struct RunArgs {
  std::string manifest;
  CheckOptions opts;
  std::string json_path;
  bool quiet = false;
  bool no_theorems = false;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("manifest", a.manifest, "manifest file or built-in example name")->required();
  cmd->add_option("--points", a.opts.points, "number of Halton sample points")->capture_default_str();
  cmd->add_option("--seed", a.opts.seed, "seed for sampling and random arguments")->capture_default_str();
  cmd->add_option("--tol", a.opts.tol, "absolute residual tolerance")->capture_default_str();
  cmd->add_option("--fd-tol", a.opts.fd_tol, "relative tolerance for jets against finite differences")
      ->capture_default_str();
  cmd->add_option("--lm-draws", a.opts.lm_draws, "random (l,m) pairs besides the manifest's own")
      ->capture_default_str();
  cmd->add_option("--json", a.json_path, "write the JSON report to PATH ('-' for stdout)");
  cmd->add_flag("--quiet", a.quiet, "suppress the text summary");
}

int run(const RunArgs& a, bool check) {
  json doc = load_document_or_builtin(a.manifest);
  ManifoldSpec spec = spec_from_json(doc);
  CheckOptions opts = a.opts;
  opts.threads = default_thread_count();
  opts.theorems = !a.no_theorems;
  CheckResult res = check ? run_check(spec, doc, opts) : run_identities(spec, doc, opts);
  if (!a.json_path.empty()) write_json(res.document, a.json_path);
  if (!a.quiet && a.json_path != "-") std::cout << render_text(res);
  return res.exit_code();
}

int infer(const std::string& manifest, std::optional<int> index) {
  SignatureListing out = infer_manifest_signature(load_document_or_builtin(manifest), index);
  std::cout << "index " << out.index << ", matched on "
            << (out.by_frame_indices ? "the claimed radical frame vectors" : "the claimed radical dimension") << "\n";
  for (const auto& c : out.candidates)
    std::cout << coordinate_list(c.timelike, out.prefix) << "  kernel dimension " << c.kernel_dim << "\n";
  std::cout << out.candidates.size() << (out.candidates.size() == 1 ? " consistent placement" : " consistent placements")
            << "\n";
  return kPass;
}

int example(const std::string& name, const std::string& output, bool list) {
  if (list) {
    for (const auto& n : builtin_names()) std::cout << n << "\n";
    return kPass;
  }
  if (name.empty()) throw ValidationError("example: a name is required (see --list)");
  write_json(builtin_manifest(name), output.empty() ? "-" : output);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightlike submanifolds of flat semi-Riemannian spaces with a bronze structure"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NULLFRAME_VERSION);

  RunArgs check_args;
  auto* check = app.add_subcommand("check", "decompose, verify identities and compare claims");
  add_run_options(check, check_args);
  check->add_flag("--no-theorems", check_args.no_theorems, "skip the theorem condition checks");

  RunArgs id_args;
  id_args.opts.lm_draws = 5;
  auto* ids = app.add_subcommand("identities", "run the identity suite only");
  add_run_options(ids, id_args);

  std::string sig_manifest;
  std::optional<int> sig_index;
  auto* sig = app.add_subcommand("infer-signature", "list timelike placements consistent with the claimed radical");
  sig->add_option("manifest", sig_manifest, "manifest file or built-in example name")->required();
  sig->add_option("--index", sig_index, "number of timelike coordinates (default: ambient.index)");

  std::string ex_name, ex_out;
  bool ex_list = false;
  auto* ex = app.add_subcommand("example", "print a built-in manifest");
  ex->add_option("name", ex_name, "example name");
  ex->add_option("-o,--output", ex_out, "write to PATH instead of stdout");
  ex->add_flag("--list", ex_list, "list the built-in examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInput;
  }

  try {
    if (*check) return run(check_args, true);
    if (*ids) return run(id_args, false);
    if (*sig) return infer(sig_manifest, sig_index);
    if (*ex) return example(ex_name, ex_out, ex_list);
  } catch (const SignatureError& e) {
    std::cerr << "nullframe: " << e.kind() << ": " << e.what() << "\n";
    return kSignature;
  } catch (const InputError& e) {
    std::cerr << "nullframe: " << e.kind() << ": " << e.what() << "\n";
    return kInput;
  } catch (const GeometryError& e) {
    std::cerr << "nullframe: " << e.kind() << ": " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "nullframe: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
