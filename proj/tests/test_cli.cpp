#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thop/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace thop;

namespace {

ProblemConfig cfg_from(const std::string& text) { return parse_config_text(text); }

const char* kShiftConfig = R"({
  "p": 2,
  "multipliers": { "a": { "trig": [ { "k": 1, "c": 1 } ] } },
  "expression": { "T": "a" },
  "grid": { "t": 48, "lambda": 33 }
})";

const char* kChordConfig = R"({
  "p": 2,
  "multipliers": {
    "a": { "piecewise_constant": { "breaks": ["pi:0.5", "pi:1.5"], "values": [1, -1] } }
  },
  "expression": { "T": "a" },
  "grid": { "t": 48, "lambda": 49 }
})";

std::string write_temp(const std::string& text, const std::string& name) {
    const std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("config parsing essentials") {
    const ProblemConfig cfg = cfg_from(kShiftConfig);
    CHECK(cfg.p == 2.0);
    CHECK(cfg.grid.t_per_segment == 48);
    Generator g;
    CHECK(cfg.expr.single_generator(&g));
    CHECK(g.a.at(0, 0).trig().size() == 1);

    CHECK_THROWS_AS(cfg_from("{"), ConfigError);
    CHECK_THROWS_AS(cfg_from(R"({"expression": {"T": "missing"}})"), ConfigError);
    CHECK_THROWS_AS(cfg_from(R"({"p": 0.5, "expression": {"T": "a"},
                                 "multipliers": {"a": 1}})"), ConfigError);
    // pi: angles
    const ProblemConfig c2 = cfg_from(R"({
      "multipliers": { "x": { "indicator": ["pi:0", "pi:1"] } },
      "expression": { "T": "x" }
    })");
    Generator g2;
    REQUIRE(c2.expr.single_generator(&g2));
    CHECK(std::abs(g2.a.at(0, 0).eval_plus(1.0) - Complex(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(g2.a.at(0, 0).eval_plus(4.0)) < 1e-14);
}

TEST_CASE("expression parsing with weights, products and markers") {
    const ProblemConfig cfg = cfg_from(R"({
      "multipliers": { "a": { "trig": [ { "k": 1, "c": 1 } ] }, "b": 2 },
      "expression": { "sum": [
        { "weight": [0, 1], "product": [ { "T": "a", "H": "b" }, "identity" ] },
        { "product": [ "compact" ] }
      ] }
    })");
    REQUIRE(cfg.expr.terms.size() == 2);
    CHECK(cfg.expr.terms[0].weight == Complex(0.0, 1.0));
    CHECK(cfg.expr.terms[0].factors.size() == 2);
    CHECK(cfg.expr.terms[1].factors[0].kind == FactorKind::Compact);
}

TEST_CASE("cmd_check exit codes") {
    std::ostringstream os;
    CHECK(cmd_check(cfg_from(kShiftConfig), os) == kExitFredholm);
    CHECK(os.str().find("fredholm: yes") != std::string::npos);

    std::ostringstream os2;
    CHECK(cmd_check(cfg_from(kChordConfig), os2) == kExitNotFredholm);
    CHECK(os2.str().find("fredholm: no") != std::string::npos);
}

TEST_CASE("cmd_index reports the shift index") {
    std::ostringstream os;
    CHECK(cmd_index(cfg_from(kShiftConfig), false, os) == kExitFredholm);
    CHECK(os.str().find("index: -1") != std::string::npos);

    std::ostringstream osd;
    CHECK(cmd_index(cfg_from(kShiftConfig), true, osd) == kExitFredholm);
    CHECK(osd.str().find("doubled_index: -2") != std::string::npos);
    CHECK(osd.str().find("doubled_matches_twice_index: yes") != std::string::npos);
}

TEST_CASE("curve CSV round trip") {
    const std::string out = "/tmp/thop_test_curve.csv";
    std::ostringstream os;
    REQUIRE(cmd_curve(cfg_from(kShiftConfig), out, os) == kExitFredholm);
    std::ifstream in(out);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "segment_index,segment_kind,t_angle,lambda,re_W,im_W");
    in.seekg(0);
    const int w = winding_from_curve_csv(in);
    CHECK(w == 1);

    // non-Fredholm input writes nothing and exits 1
    std::ostringstream os2;
    CHECK(cmd_curve(cfg_from(kChordConfig), "/tmp/thop_should_not_exist.csv", os2) ==
          kExitNotFredholm);

    // determinism: identical configs give byte-identical files
    const std::string out2 = "/tmp/thop_test_curve2.csv";
    std::ostringstream os3;
    REQUIRE(cmd_curve(cfg_from(kShiftConfig), out2, os3) == kExitFredholm);
    std::ifstream f1(out), f2(out2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().find("-inf") != std::string::npos);
    CHECK(s1.str().find("+inf") != std::string::npos);
}

TEST_CASE("curve CSV round trip with jump arcs") {
    const ProblemConfig cfg = cfg_from(R"({
      "p": 1.5,
      "multipliers": {
        "a": { "piecewise_constant": { "breaks": ["pi:0.3", "pi:1.2", "pi:1.8"],
                                       "values": [[1,0.2], [0.3,-0.9], [0.8,0.6]] } },
        "b": { "piecewise_constant": { "breaks": ["pi:0.4", "pi:1.6"],
                                       "values": [[0.5,0.5], [-0.3,0.4]] } }
      },
      "expression": { "T": "a", "H": "b" },
      "grid": { "t": 48, "lambda": 33 }
    })");
    const IndexReport rep = index_TH(cfg.expr, cfg.p, cfg.grid);
    if (rep.fredholm) {
        const std::string out = "/tmp/thop_test_curve_jumps.csv";
        std::ostringstream os;
        REQUIRE(cmd_curve(cfg, out, os) == kExitFredholm);
        std::ifstream in(out);
        CHECK(winding_from_curve_csv(in) == rep.winding);
    }
}

TEST_CASE("curve endpoints sit at 1") {
    const std::string out = "/tmp/thop_test_curve3.csv";
    std::ostringstream os;
    REQUIRE(cmd_curve(cfg_from(kShiftConfig), out, os) == kExitFredholm);
    std::ifstream in(out);
    std::string line, first, last;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (first.empty()) first = line;
        if (!line.empty()) last = line;
    }
    auto re_im = [](const std::string& row) {
        const size_t p2 = row.rfind(',');
        const size_t p1 = row.rfind(',', p2 - 1);
        return Complex(std::stod(row.substr(p1 + 1, p2 - p1 - 1)),
                       std::stod(row.substr(p2 + 1)));
    };
    CHECK(std::abs(re_im(first) - Complex(1.0, 0.0)) < 1e-8);
    CHECK(std::abs(re_im(last) - Complex(1.0, 0.0)) < 1e-8);
}

TEST_CASE("cmd_spectrum writes the cloud") {
    const std::string out = "/tmp/thop_test_spec.csv";
    std::ostringstream os;
    const ProblemConfig cfg = cfg_from(R"({
      "multipliers": { "f": { "sawtooth": true } },
      "expression": { "H": "f" },
      "grid": { "t": 16, "lambda": 17 }
    })");
    REQUIRE(cmd_spectrum(cfg, out, os) == kExitFredholm);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "re,im,t_angle,lambda");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows > 10);
}

TEST_CASE("cmd_oracle on a banded symbol") {
    std::ostringstream os;
    CHECK(cmd_oracle(cfg_from(kShiftConfig), os) == kExitFredholm);
    CHECK(os.str().find("laurent_oracle: pass") != std::string::npos);
    CHECK(os.str().find("oracle_suite: pass") != std::string::npos);

    // near-circle root: skipped with notice, still exit 0
    std::ostringstream os2;
    const ProblemConfig near = cfg_from(R"({
      "multipliers": { "a": { "trig": [ { "k": 0, "c": 1 }, { "k": 1, "c": -1 } ] } },
      "expression": { "T": "a" },
      "grid": { "t": 16, "lambda": 9 }
    })");
    CHECK(cmd_oracle(near, os2) == kExitFredholm);
    CHECK(os2.str().find("laurent_oracle: skipped") != std::string::npos);
}

TEST_CASE("end-to-end binary run") {
#ifdef THOP_CLI_PATH
    const std::string cfg_path = write_temp(kShiftConfig, "thop_e2e_shift.json");
    const std::string cmd = std::string(THOP_CLI_PATH) + " index " + cfg_path +
                            " > /tmp/thop_e2e_out.txt 2>&1";
    const int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    std::ifstream in("/tmp/thop_e2e_out.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("index: -1") != std::string::npos);

    const std::string bad = write_temp("{ not json", "thop_e2e_bad.json");
    const int rc2 = std::system((std::string(THOP_CLI_PATH) + " check " + bad +
                                 " > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc2) == 3);

    const std::string chord_path = write_temp(kChordConfig, "thop_e2e_chord.json");
    const int rc3 = std::system((std::string(THOP_CLI_PATH) + " check " + chord_path +
                                 " > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc3) == 1);
#endif
}
