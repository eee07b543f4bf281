#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "wigflux/wigflux.h"

namespace {

const char* kind_name(wf_status s) {
  switch (s) {
    case WF_ERR_CONFIG: return "config";
    case WF_ERR_NUMERICAL: return "numerical";
    case WF_ERR_IO: return "io";
    default: return "internal";
  }
}

// Messages stay on one line for machine parsing.
std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space continuity fluxes along classical orbits"};
  std::string config;
  std::string out;
  bool emit_fields = false;
  bool quiet = false;
  app.add_option("--config", config, "JSON run file")->required();
  app.add_option("--out", out, "output directory (overrides output_dir)");
  app.add_flag("--emit-fields", emit_fields, "write fields/W_<tau>.csv");
  app.add_flag("--quiet", quiet, "no summary on success");
  app.allow_extras(false);
  app.positionals_at_end(false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error kind=config where=cli.args message=%s\n",
                 one_line(e.what()).c_str());
    return WF_ERR_CONFIG;
  }

  char summary[512] = {0};
  const wf_status status = wf_run_config_file(config.c_str(), out.empty() ? nullptr : out.c_str(),
                                              emit_fields ? 1 : -1, summary, sizeof summary);
  if (status != WF_OK) {
    std::fprintf(stderr, "error kind=%s message=%s\n", kind_name(status),
                 one_line(wf_last_error()).c_str());
    return static_cast<int>(status);
  }
  if (!quiet) std::printf("%s\n", summary);
  return 0;
}
