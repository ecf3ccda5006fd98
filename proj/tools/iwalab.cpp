#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "iwalab/workbench.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw iwalab::Error(iwalab::Errc::InvalidArgument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"iwalab: Euler characteristics, Akashi series and twist searches for Iwasawa modules"};
    std::string command, input, out;
    int max_precision = iwalab::PadicContext::kMaxPrecision;
    std::optional<int> precision, budget;
    app.add_option("command", command, "prepare | char | euler | akashi | find-twist | selftest")->required();
    app.add_option("--input,-i", input, "problem file (JSON)");
    app.add_option("--precision,-N", precision, "starting p-adic precision N");
    app.add_option("--max-precision", max_precision, "escalation cap for N")->capture_default_str();
    app.add_option("--budget", budget, "candidate budget for find-twist");
    app.add_option("--out,-o", out, "report file (default: <input>.report.json)");
    CLI11_PARSE(app, argc, argv);

    try {
        auto cmd = iwalab::parse_command(command);
        if (!cmd) throw iwalab::Error(iwalab::Errc::InvalidArgument, "unknown command \"" + command + "\"");
        iwalab::RunOptions options;
        options.precision = precision;
        options.max_precision = max_precision;
        options.budget = budget;

        iwalab::RunReport report;
        if (*cmd == iwalab::Command::Selftest && input.empty()) {
            report = iwalab::run_selftest(options);
        } else {
            if (input.empty()) throw iwalab::Error(iwalab::Errc::InvalidArgument, "--input is required");
            const std::string text = read_file(input);
            report = iwalab::run(iwalab::parse_problem(text), *cmd, options, text);
        }
        std::cout << report.table;
        const std::string path = !out.empty() ? out : input.empty() ? std::string() : input + ".report.json";
        if (!path.empty()) {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw iwalab::Error(iwalab::Errc::InvalidArgument, "cannot write " + path);
            f << report.json;
        }
        return report.exit_code;
    } catch (const iwalab::Error& e) {
        std::cerr << "iwalab: " << e.what() << "\n";
        return iwalab::kExitError;
    }
}
