// Command-line driver for the weak Jacobi form computations.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "wjf/cli.hpp"

namespace {

struct IntFlag {
    const char* name;
    const char* help;
    std::optional<std::int64_t> wjf::RunConfig::*field;
};

const IntFlag kIntFlags[] = {
    {"--m", "index m", &wjf::RunConfig::m},
    {"--m-max", "largest index of a range 1..m-max", &wjf::RunConfig::m_max},
    {"--a", "q-exponent of the anchor term (default 0)", &wjf::RunConfig::a},
    {"--b", "y-exponent of the anchor term", &wjf::RunConfig::b},
    {"--order", "q-order of the expansions (must cover the computed requirement)", &wjf::RunConfig::order},
    {"--n-max", "grid bound for n (default 3)", &wjf::RunConfig::n_max},
    {"--l-max", "grid bound for |l| (default 2m)", &wjf::RunConfig::l_max},
    {"--N-max", "theta factors per side in quotient enumeration (default 5)", &wjf::RunConfig::N_max},
    {"--n-b", "restrict chi to this n_b", &wjf::RunConfig::n_b},
    {"--j", "restrict chi to this j", &wjf::RunConfig::j},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weight 0 weak Jacobi forms: slow growth, polarity bounds and theta quotients"};
    app.require_subcommand(1);
    wjf::RunConfig config;
    std::map<std::string, std::int64_t> ints;
    std::string form = config.form, output, cache_dir;
    bool svg = false;

    const std::map<std::string, std::string> help = {
        {"basis", "list the generator-monomial basis of J_{0,m}"},
        {"polar", "list the polar terms of index m"},
        {"pm", "smallest maximal polarity P(m)"},
        {"pminus", "lower bound ceil(m/6)"},
        {"pplus", "upper bound P+(m)"},
        {"jminus", "lower bound j-(m) for slow growing forms"},
        {"dims", "dimensions of slow growing spaces about y^b"},
        {"f", "values f_{a,b}(n,l) on a grid"},
        {"classify", "slow/fast classification about q^a y^b"},
        {"chi", "specialisations chi_{n_b,j} with coefficients in Z[x]/(x^b-1)"},
        {"quotients", "slow theta quotients and their span"},
        {"figures", "CSV (and SVG with --svg) for the four scatter plots"},
    };
    for (const std::string& name : wjf::command_names()) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        for (const IntFlag& f : kIntFlags) sub->add_option(f.name, ints[f.name], f.help);
        sub->add_option("--form", form, "phi01|phi02|phi03|mono:A,B,C|theta:n1,n2/m1,m2|slow (default slow)");
        sub->add_option("--output", output, "output file (directory for figures)");
        sub->add_option("--cache-dir", cache_dir, "basis cache directory (default $WJF_CACHE_DIR)");
        sub->add_flag("--svg", svg, "also write SVG plots (figures)");
        sub->callback([&config, name] { config.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    for (const IntFlag& f : kIntFlags)
        if (sub->count(f.name) > 0) config.*(f.field) = ints[f.name];
    config.form = form;
    if (sub->count("--output") > 0) config.output = output;
    if (sub->count("--cache-dir") > 0) config.cache_dir = cache_dir;
    config.svg = svg;
    return wjf::execute(config, std::cout, std::cerr);
}
