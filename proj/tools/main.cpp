// wunschlab — configuration-driven experiment runner for the spectral
// circle-diffeomorphism laboratory.
//
//   wunschlab --config run.json [--out DIR] [--seed U64] [--threads N]
//             [--subcommand NAME]
//
// Exit codes: 0 success (including detected blowup), 1 numeric failure,
// 2 configuration error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "wunsch/cli.hpp"

namespace {

constexpr const char* usage =
    "usage: wunschlab --config PATH [--out DIR] [--seed U64] [--threads N]\n"
    "                 [--subcommand simulate|jacobi|conjugate|blowup|curvature|\n"
    "                               inequality|distance|identities]\n";

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        std::fputs(usage, stdout);
        return args.empty() ? 2 : 0;
    }
    try {
        return wunsch::run_cli(args);
    } catch (const wunsch::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
