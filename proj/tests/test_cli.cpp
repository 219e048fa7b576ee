// End-to-end checks of the installed command-line tool. Run as:
//   test_cli <path-to-planarmap-binary>
// No framework: each expectation prints its own failure line, the process
// exit code is the failure count.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/stat.h>
#include <sys/wait.h>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        std::fprintf(stderr, "FAIL: %s\n", what.c_str());
        ++failures;
    }
}

std::string g_bin;
std::string g_dir;

// Runs `planarmap <args>` with stdout/stderr captured to files; returns the
// exit code (-1 when the process did not exit normally).
int run(const std::string& args) {
    const std::string cmd = "\"" + g_bin + "\" " + args + " > " + g_dir + "/out.txt 2> " + g_dir +
                            "/err.txt";
    int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string out_text() { return slurp(g_dir + "/out.txt"); }
std::string err_text() { return slurp(g_dir + "/err.txt"); }

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + needle.size()))
        ++n;
    return n;
}

void test_analyze() {
    int code = run("analyze --f \"y-(2*x-y)^4\" --g \"2*x-y\"");
    expect(code == 0, "quartic pair exits 0, got " + std::to_string(code));
    std::string json = out_text();
    expect(contains(json, "\"verdict\": \"InjectiveByTheorem1\""), "quartic pair verdict");
    expect(contains(json, "\"value\": \"-2\""), "quartic pair jacobian value");
    expect(contains(json, "\"case\": \"A4\""), "quartic pair endpoint case");

    expect(run("analyze --f x --g x") == 2, "degenerate pair exits 2");
    expect(run("analyze --f \"1+x-x^2*y\" --g y") == 4, "three-branch level exits 4");
    expect(run("analyze --f \"x+x^3\" --g y") == 3, "nonvanishing nonconstant exits 3");

    const std::string report = g_dir + "/report.json";
    code = run("analyze --f \"y-x^3\" --g \"y-x-x^3\" --json " + report);
    expect(code == 0, "cubic pair exits 0");
    expect(contains(slurp(report), "\"verdict\": \"InjectiveByTheorem1\""), "json file verdict");
    expect(contains(out_text(), "report written to"), "json path confirmation on stdout");
}

void test_errors() {
    int code = run("analyze --f \"y-(2*x-\" --g y");
    expect(code == 1, "parse error exits 1, got " + std::to_string(code));
    std::string err = err_text();
    expect(contains(err, "error in --f"), "parse error names the flag");
    expect(contains(err, "^"), "parse error carries a caret");

    expect(run("analyze --f x") == 1, "missing required flag exits 1");
    expect(run("analyze --f x --g y --window 1,2,3") == 1, "bad window exits 1");
    expect(contains(err_text(), "--window expects"), "bad window message");
    expect(run("") == 1, "missing subcommand exits 1");
    expect(run("verify --suite bogus") == 1, "unknown suite exits 1");
    expect(contains(err_text(), "unknown suite"), "unknown suite message");
}

void test_levelset() {
    const std::string csv = g_dir + "/level.csv";
    int code = run("levelset --f \"1+x-x^2*y\" --level 1 --out " + csv + " --format csv");
    expect(code == 0, "levelset csv exits 0");
    std::string text = slurp(csv);
    expect(text.rfind("level,branch,x,y\n", 0) == 0, "levelset csv header");
    expect(contains(text, "\n1,0,"), "levelset csv branch 0");
    expect(contains(text, "\n1,1,"), "levelset csv branch 1");
    expect(contains(text, "\n1,2,"), "levelset csv branch 2");
    expect(!contains(text, "\n1,3,"), "levelset csv has exactly three branches");

    code = run("levelset --f \"x^2+y^2\" --level -1 --out " + csv + " --format csv");
    expect(code == 0, "empty levelset exits 0");
    expect(slurp(csv) == "level,branch,x,y\n", "empty levelset is header-only");

    const std::string svg = g_dir + "/level.svg";
    code = run("levelset --f \"y-x^2\" --level 0 --out " + svg + " --format svg");
    expect(code == 0, "levelset svg exits 0");
    text = slurp(svg);
    expect(contains(text, "<svg"), "svg root element");
    expect(contains(text, "<polyline"), "svg has a traced polyline");
    expect(contains(text, "vertical (m=2)"), "svg labels the infinity direction");
}

void test_flow() {
    int code = run("flow --f \"x^2+y^2\" --p0 1,0 --tmax 1");
    expect(code == 0, "flow exits 0");
    std::string text = out_text();
    expect(text.rfind("t,x,y\n", 0) == 0, "flow csv header");
    expect(contains(text, "# terminal=ReachedTime"), "flow terminal comment");

    expect(run("flow --f \"x^2+y^2\" --p0 1,0 --tmax 1 --backward") == 0, "backward flow exits 0");

    const std::string csv = g_dir + "/traj.csv";
    code = run("flow --f \"x^2+y^2\" --p0 1,0 --tmax 1 --out " + csv);
    expect(code == 0, "flow --out exits 0");
    expect(slurp(csv).rfind("t,x,y\n", 0) == 0, "flow --out file header");

    expect(run("flow --f x --p0 0,0 --tmax -1") == 1, "negative tmax exits 1");
    expect(run("flow --f x --p0 oops --tmax 1") == 1, "bad p0 exits 1");
}

void test_portrait() {
    const std::string svg = g_dir + "/portrait.svg";
    int code = run("portrait --f \"y-x^3\" --g \"y-x-x^3\" --out " + svg);
    expect(code == 0, "portrait exits 0");
    std::string text = slurp(svg);
    expect(contains(text, "<svg"), "portrait svg root");
    // one vertical infinity direction per component: two antipodal filled
    // circles for f, two open squares for g
    expect(count_of(text, "<circle") == 2, "portrait f marks");
    expect(count_of(text, "<rect x=") == 2, "portrait g marks");
    expect(contains(text, "#1f77b4"), "portrait f color");
    expect(contains(text, "#d95f02"), "portrait g color");
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: test_cli <planarmap-binary>\n");
        return 127;
    }
    g_bin = argv[1];

    char tmpl[] = "/tmp/planarmap_cli_XXXXXX";
    if (!mkdtemp(tmpl)) {
        std::fprintf(stderr, "cannot create a scratch directory\n");
        return 127;
    }
    g_dir = tmpl;

    test_analyze();
    test_errors();
    test_levelset();
    test_flow();
    test_portrait();

    if (failures == 0) {
        std::printf("test_cli: all checks passed\n");
    } else {
        std::printf("test_cli: %d check(s) failed\n", failures);
    }
    return failures;
}
