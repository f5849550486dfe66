#include "commands.hpp"

#include "embc/error.hpp"

#include <json.hpp>

#include <iostream>
#include <vector>

namespace {

void error_line(std::string_view kind, const std::string& message) {
    nlohmann::json j{{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << j.dump() << std::endl;
}

int exit_code(embc::ErrorKind kind) {
    switch (kind) {
    case embc::ErrorKind::schema:
    case embc::ErrorKind::lookup:
    case embc::ErrorKind::spec:
        return 3;
    default:
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop compression benchmark for embodied agents", "embc"};
    app.set_version_flag("--version", embc::cli::version_string());
    app.require_subcommand(1);

    std::vector<std::pair<CLI::App*, embc::cli::Action>> actions;
    auto add = [&](const char* name, const char* help, auto adder) {
        CLI::App* sub = app.add_subcommand(name, help);
        actions.emplace_back(sub, adder(*sub));
    };
    add("budget", "Per-image bpp budgets for the channel scenarios", embc::cli::add_budget);
    add("transcode", "Transcode a PPM frame under a bpp budget", embc::cli::add_transcode);
    add("render", "Render a scene observation as PPM", embc::cli::add_render);
    add("run", "Run one benchmark cell from a config", embc::cli::add_run);
    add("sweep", "Run every (codec, budget, profile) cell from a config", embc::cli::add_sweep);
    add("analyze", "Statistics report from results.json", embc::cli::add_analyze);
    add("scenes", "Scene suite utilities", embc::cli::add_scenes);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << app.version() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        error_line("usage", e.what());
        return 2;
    }

    try {
        for (auto& [sub, action] : actions)
            if (sub->parsed())
                return action();
        error_line("usage", "no subcommand given");
        return 2;
    } catch (const CLI::ParseError& e) {
        error_line("usage", e.what());
        return 2;
    } catch (const embc::Error& e) {
        error_line(embc::to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        error_line("internal", e.what());
        return 1;
    }
}
