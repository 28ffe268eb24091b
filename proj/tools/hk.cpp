// Command-line front end: hk {means,geometry,figure,recon,verify} [flags]

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hk/harness.hpp"

namespace {

constexpr int kInputError = static_cast<int>(hk::ExitCode::InputError);

std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string field = text.substr(pos, comma - pos);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
      throw CLI::ValidationError(flag, "'" + field + "' is not a number");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  hk::ExperimentConfig config;
  config.seed = hk::default_seed();
  std::string a_text, w_text;

  CLI::App app{"Weighted means, prism geometry and harmonic-mean reconstruction experiments"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "Random seed (default: HK_DEFAULT_SEED or built-in)");
    cmd->add_option("--format", config.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", config.out, "Output path (default: stdout)");
  };
  const auto add_sample = [&](CLI::App* cmd) {
    cmd->add_option("--a", a_text, "Comma-separated positive arguments");
    cmd->add_option("--w", w_text, "Comma-separated positive weights, or 'uniform'");
  };
  const auto add_scene = [&](CLI::App* cmd) {
    cmd->add_option("--variant", config.variant, "Construction")->check(CLI::IsMember({"thm3", "thm4", "corollary"}));
    cmd->add_option("--case", config.case_id, "Parabola case for n = 2")->check(CLI::IsMember({1, 2, 3}));
  };

  CLI::App* means = app.add_subcommand("means", "Harmonic and arithmetic means with the gap identity");
  add_sample(means);
  add_common(means);

  CLI::App* geometry = app.add_subcommand("geometry", "Prism construction, intersection point and heights");
  add_sample(geometry);
  add_scene(geometry);
  geometry->add_option("--starts", config.starts, "Random Newton starts")->check(CLI::NonNegativeNumber);
  add_common(geometry);

  CLI::App* figure = app.add_subcommand("figure", "Surface samples and markers for plotting");
  add_sample(figure);
  add_scene(figure);
  figure->add_option("--resolution", config.resolution, "Samples per base edge")->check(CLI::Range(2, 100000));
  figure->add_flag("--markers-only", config.markers_only, "Emit markers only (allowed for any n)");
  add_common(figure);

  CLI::App* recon = app.add_subcommand("recon", "Linear and harmonic-mean reconstruction experiments");
  recon->add_option("--signal", config.signal, "Test signal")->check(CLI::IsMember({"step", "sin", "cubic", "custom"}));
  recon->add_option("--samples", config.samples_path, "Samples file for --signal custom ('x,f' per line)");
  recon->add_option("--operator", config.op, "Operator")->check(CLI::IsMember({"linear", "pph", "both"}));
  recon->add_option("--policy", config.policy, "Sign policy")->check(CLI::IsMember({"clip", "translate"}));
  recon->add_option("--scale", config.translate_scale, "Translate policy scale");
  recon->add_option("--levels", config.levels, "Refinement levels");
  add_common(recon);

  CLI::App* verify = app.add_subcommand("verify", "Seeded randomized property suite");
  verify->add_option("--cases", config.cases, "Random cases per property family")->check(CLI::PositiveNumber);
  add_common(verify);

  try {
    app.parse(argc, argv);
    for (CLI::App* cmd : {means, geometry, figure, recon, verify}) {
      if (cmd->parsed()) config.command = cmd->get_name();
    }
    if (!a_text.empty()) config.a = parse_list("--a", a_text);
    if (w_text == "uniform") {
      config.uniform_weights = true;
    } else if (!w_text.empty()) {
      config.w = parse_list("--w", w_text);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  const hk::CommandResult result = hk::run_command(config);
  if (!result.diagnostics.empty()) std::cerr << result.diagnostics << (result.diagnostics.back() == '\n' ? "" : "\n");
  if (!result.output.empty()) {
    if (config.out.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream file(config.out, std::ios::binary);
      file << result.output;
      if (!file) {
        std::cerr << "cannot write '" << config.out << "'\n";
        return kInputError;
      }
    }
  }
  return result.exit_code;
}
