#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pdc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "High-gain parametric down-conversion spectra in uniaxial crystals: "
      "phase matching, walk-off, group-velocity matching, Schmidt modes."};
  app.require_subcommand(1);

  pdc::CliOptions opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"tuning-curve", "phase-matched signal wavelength vs external angle"},
      {"walkoff", "pump walk-off angle and emission-cone estimates"},
      {"gvm", "group-velocity-matched point on the tuning curve"},
      {"angular-spectrum", "photon number vs emission angle at high gain"},
      {"frequency-spectrum", "photon number vs wavelength at high gain"},
      {"modes", "Schmidt weights and gain-renormalized mode statistics"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("config", opt.config_path, "configuration file")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory")
        ->capture_default_str();
    sub->add_flag("--svg", opt.svg, "also write SVG line plots");
    sub->add_option("--grid", opt.grid_override,
                    "override the grid sample count");
    sub->add_option("--cutoff", opt.cutoff,
                    "relative cutoff on retained Schmidt weights")
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  return pdc::run_command(app.get_subcommands().front()->get_name(), opt);
}
