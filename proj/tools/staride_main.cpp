#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "staride/harness.hpp"

using namespace staride;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot read file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string stem_of(const std::string& path)
{
    auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

void emit_scenario(const ScenarioReport& rep, const std::string& format, bool timings)
{
    if (format == "json")
        std::cout << rep.to_json(timings).dump(2) << "\n";
    else
        std::cout << rep.text();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact divisorial / t-operation arithmetic over constraint "
                 "monoid rings and their polynomial extensions"};
    app.require_subcommand(1);

    long long degree = -1, window = -1;
    std::string format = "text";
    bool timings = false;
    std::string id, scenario_path, suite_kind, fixtures_path;

    auto* run = app.add_subcommand("run-example", "run a built-in worked example");
    run->add_option("id", id, "example id (3.1 or 3.2)")->required();

    auto* check =
        app.add_subcommand("check", "parse, compile, and run a scenario file");
    check->add_option("file", scenario_path, "scenario file")->required();

    auto* suite = app.add_subcommand("suite", "run property suites over a fixture catalog");
    suite->add_option("kind", suite_kind, "suite kind (props)")->required();
    suite->add_option("--fixtures", fixtures_path,
                      "fixture catalog file (default: built-in catalog)");

    for (auto* s : {run, check, suite}) {
        s->add_option("--degree-bound", degree,
                      "cap on total degree of enumerated monomials");
        s->add_option("--family-window", window, "cap on enumerated family indices");
        s->add_option("--report", format, "report format")
            ->check(CLI::IsMember({"text", "json"}));
        s->add_flag("--timings", timings, "include wall-clock timings (json only)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Bounds b{};
        if (degree >= 0) b.degree = degree;
        if (window >= 0) b.window = window;

        if (run->parsed()) {
            ScenarioReport rep = run_builtin_example(id, b);
            emit_scenario(rep, format, timings);
            return rep.ok() ? 0 : 1;
        }
        if (check->parsed()) {
            auto sc = compile(parse_file(read_file(scenario_path), scenario_path), b);
            // command-line bounds win over a bounds declaration in the file
            if (degree >= 0) sc.bounds.degree = degree;
            if (window >= 0) sc.bounds.window = window;
            ScenarioReport rep = run_scenario(stem_of(scenario_path), sc);
            emit_scenario(rep, format, timings);
            return rep.ok() ? 0 : 1;
        }
        if (suite->parsed()) {
            if (suite_kind != "props")
                throw input_error("unknown suite kind '" + suite_kind +
                                  "' (have: props)");
            std::vector<ClassifiedFixture> fixtures;
            Bounds sb = b;
            if (fixtures_path.empty()) {
                fixtures = builtin_fixtures();
            } else {
                auto sc = compile(parse_file(read_file(fixtures_path), fixtures_path), b);
                if (sc.fixtures.empty())
                    throw input_error("no fixtures declared in '" + fixtures_path + "'");
                fixtures = std::move(sc.fixtures);
                sb = sc.bounds;
                if (degree >= 0) sb.degree = degree;
                if (window >= 0) sb.window = window;
            }
            SuitesReport rep = run_suites(fixtures, sb);
            if (format == "json")
                std::cout << rep.to_json().dump(2) << "\n";
            else
                std::cout << rep.text();
            return rep.ok() ? 0 : 1;
        }
        return 3;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
