#include "sas/cli.hpp"
#include "sas/generators.hpp"
#include "sas/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sas;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "sas");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "sas_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string two_state_file() {
    const fs::path path = scratch() / "two_state.json";
    write_instance_file(path.string(), two_state_document(0.2, 0.9));
    return path.string();
}

} // namespace

TEST_CASE("solve prints the two-state answer") {
    const std::string file = two_state_file();
    for (const char* solver : {"vi", "pi", "lp", "embedded"}) {
        const Run r = run({"solve", "--instance", file, "--solver", solver});
        CHECK(r.code == 0);
        CHECK(r.out.find("V(s1) = 5.000000  DL(s1) = [Stay, Go]") != std::string::npos);
        CHECK(r.out.find("DL(s2) = [Up, Down]") != std::string::npos);
        CHECK(r.out.find("wall_time_ms") != std::string::npos);
    }
}

TEST_CASE("oracle cross-check on a random instance") {
    const fs::path file = scratch() / "random.json";
    REQUIRE(run({"generate", "--kind", "random", "--states", "4", "--actions", "3", "--seed", "5", "--out",
                 file.string()})
                .code == 0);
    const fs::path report = scratch() / "report.json";
    const Run r = run({"solve", "--instance", file.string(), "--solver", "lp", "--oracle", "--out", report.string()});
    CHECK(r.code == 0);
    const auto pos = r.out.find("oracle_max_abs_diff: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 21)) <= 1e-6);
    CHECK(slurp(report).find("\"constraints\"") != std::string::npos);
}

TEST_CASE("vi, pi and lp agree on generated instances") {
    for (const char* model : {"pda", "explicit"}) {
        const fs::path file = scratch() / (std::string("agree_") + model + ".json");
        REQUIRE(run({"generate", "--kind", "random", "--model", model, "--states", "5", "--actions", "4", "--out",
                     file.string()})
                    .code == 0);
        std::vector<std::string> outputs;
        for (const char* solver : {"vi", "pi", "lp"}) {
            const fs::path report = scratch() / (std::string("agree_") + solver + ".json");
            REQUIRE(run({"solve", "--instance", file.string(), "--solver", solver, "--eps", "1e-10", "--out",
                         report.string()})
                        .code == 0);
            outputs.push_back(slurp(report));
        }
        std::vector<std::vector<double>> values;
        for (const auto& text : outputs) {
            const auto start = text.find("\"values\"");
            std::stringstream in(text.substr(text.find('[', start) + 1));
            std::vector<double> v;
            double x;
            char sep;
            while (in >> x) {
                v.push_back(x);
                in >> sep;
                if (sep == ']') {
                    break;
                }
            }
            values.push_back(v);
        }
        for (std::size_t s = 0; s < 5; ++s) {
            CHECK(values[0][s] == doctest::Approx(values[1][s]).epsilon(1e-6));
            CHECK(values[1][s] == doctest::Approx(values[2][s]).epsilon(1e-6));
        }
    }
}

TEST_CASE("malformed transitions exit with code 2") {
    InstanceDocument doc = two_state_document(0.2, 0.9);
    doc.mdp.transition_row(0, 0)[0] = 0.7;
    const fs::path file = scratch() / "leaky.json";
    write_instance_file(file.string(), doc);
    const Run r = run({"solve", "--instance", file.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("\"NonStochasticRow\"") != std::string::npos);
    CHECK(run({"solve", "--instance", (scratch() / "missing.json").string()}).code == 2);
    CHECK(run({"solve"}).code == 2);
    CHECK(run({"solve", "--instance", two_state_file(), "--solver", "magic"}).code == 2);
}

TEST_CASE("learn output is deterministic and validated") {
    const std::string file = two_state_file();
    const fs::path a = scratch() / "learn_a.csv", b = scratch() / "learn_b.csv";
    const Run ra = run({"learn", "--instance", file, "--steps", "20000", "--seed", "3", "--out", a.string()});
    const Run rb = run({"learn", "--instance", file, "--steps", "20000", "--seed", "3", "--out", b.string()});
    CHECK(ra.code == 0);
    CHECK(rb.code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("episode,mean_return,epsilon\n", 0) == 0);
    const Run zero = run({"learn", "--instance", file, "--steps", "0"});
    CHECK(zero.code == 2);
    CHECK(zero.err.find("BadSampleCount") != std::string::npos);
}

TEST_CASE("learn with defaults matches value iteration") {
    const Run r = run({"learn", "--instance", two_state_file(), "--out", (scratch() / "learn.csv").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("DL(s1) = [Stay, Go]") != std::string::npos);
    CHECK(r.out.find("matches_vi_policy: yes") != std::string::npos);
}

TEST_CASE("curve CSV") {
    const Run r = run({"curve", "--gamma", "0.9", "--p-grid", "0.2,0.5,1"});
    CHECK(r.code == 0);
    CHECK(r.out == "p,V_sas,V_naive,fraction_lost\n"
                   "0.2,5,3.57894737,0.284210526\n"
                   "0.5,5,5,2.22044605e-16\n"
                   "1,7.36842105,7.36842105,0\n");
    CHECK(run({"curve", "--p-grid", "0,0.5"}).code == 2);
    CHECK(run({"curve", "--p-grid", "abc"}).code == 2);
}

TEST_CASE("routing CSV is deterministic") {
    const Run a = run({"routing", "--seed", "4"});
    const Run b = run({"routing", "--seed", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("p,sas_cost,oblivious_cost\n", 0) == 0);
    CHECK(run({"routing", "--edge-avail", "0"}).code == 2);
}

TEST_CASE("vi, pi and lp agree on every bundled instance") {
    std::size_t checked = 0;
    for (const auto& entry : fs::directory_iterator(SAS_INSTANCE_DIR)) {
        const InstanceDocument doc = read_instance_file(entry.path().string());
        const Instance inst = validate(doc.mdp, doc.availability);
        if (!inst.is_exact()) {
            continue;
        }
        std::vector<std::vector<double>> values;
        for (const char* solver : {"vi", "pi", "lp"}) {
            const fs::path report = scratch() / "bundled.json";
            REQUIRE(run({"solve", "--instance", entry.path().string(), "--solver", solver, "--eps", "1e-9", "--out",
                         report.string()})
                        .code == 0);
            const std::string text = slurp(report);
            std::vector<double> v;
            std::stringstream in(text.substr(text.find('[', text.find("\"values\"")) + 1));
            double x;
            char sep = ',';
            while (sep == ',' && in >> x >> sep) {
                v.push_back(x);
            }
            values.push_back(v);
        }
        for (std::size_t s = 0; s < inst.n_states(); ++s) {
            CHECK(std::abs(values[0][s] - values[1][s]) <= 1e-6);
            CHECK(std::abs(values[1][s] - values[2][s]) <= 1e-6);
        }
        ++checked;
    }
    CHECK(checked >= 5);
}
