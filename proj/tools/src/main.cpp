#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <planarmap/analyzer.hpp>
#include <planarmap/compactify.hpp>
#include <planarmap/errors.hpp>
#include <planarmap/flow.hpp>
#include <planarmap/hamiltonian.hpp>
#include <planarmap/level_tracer.hpp>
#include <planarmap/parse.hpp>
#include <planarmap/verification.hpp>

#include "svg.hpp"

namespace {

using namespace planarmap;

Polynomial parse_flag(const std::string& text, const char* flag) {
    try {
        return parse(text);
    } catch (const ParseError& e) {
        std::cerr << "error in " << flag << ": " << e.what() << "\n  " << text << "\n  "
                  << caret_line(e.position) << "\n";
        std::exit(1);
    }
}

Window parse_window(const std::string& s) {
    Window w{};
    char tail = 0;
    int n = std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf%c", &w.x_min, &w.x_max, &w.y_min, &w.y_max,
                        &tail);
    if (n != 4 || !(w.x_min < w.x_max) || !(w.y_min < w.y_max)) {
        std::cerr << "error: --window expects xmin,xmax,ymin,ymax with xmin<xmax and ymin<ymax\n";
        std::exit(1);
    }
    return w;
}

Point parse_point(const std::string& s) {
    Point p{};
    char tail = 0;
    int n = std::sscanf(s.c_str(), "%lf,%lf%c", &p.x, &p.y, &tail);
    if (n != 2 || !std::isfinite(p.x) || !std::isfinite(p.y)) {
        std::cerr << "error: --p0 expects two finite numbers x,y\n";
        std::exit(1);
    }
    return p;
}

// First hit of the ray from `from` along `dir` on the window frame.
Point ray_to_frame(Point from, Point dir, const Window& w) {
    double t = 1e300;
    auto cut = [&](double num, double den) {
        if (den > 1e-300) t = std::min(t, num / den);
    };
    cut(w.x_max - from.x, dir.x);
    cut(from.x - w.x_min, -dir.x);
    cut(w.y_max - from.y, dir.y);
    cut(from.y - w.y_min, -dir.y);
    return {from.x + t * dir.x, from.y + t * dir.y};
}

int cmd_analyze(const std::string& f_text, const std::string& g_text, const std::string& window_s,
                const std::string& json_path) {
    Polynomial f = parse_flag(f_text, "--f");
    Polynomial g = parse_flag(g_text, "--g");
    AnalyzeOptions opts;
    opts.window = parse_window(window_s);
    MapAnalysisReport rep;
    try {
        rep = analyze(f, g, opts);
    } catch (const ConstantInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::string json = report_to_json(rep);
    if (json_path.empty()) {
        std::cout << json;
    } else {
        std::ofstream out(json_path);
        if (!out || !(out << json)) {
            std::cerr << "error: cannot write " << json_path << "\n";
            return 1;
        }
        std::cout << "verdict: " << verdict_name(rep.verdict) << " (report written to "
                  << json_path << ")\n";
    }
    return verdict_exit_code(rep.verdict);
}

int cmd_levelset(const std::string& f_text, double level, const std::string& window_s,
                 const std::string& out_path, const std::string& format) {
    Polynomial f = parse_flag(f_text, "--f");
    Window window = parse_window(window_s);
    auto branches = trace_level(f, level, window);

    if (format == "csv") {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 1;
        }
        write_branches_csv(out, branches);
        return 0;
    }

    double pad_x = 0.04 * window.width(), pad_y = 0.04 * window.height();
    svgplot::Canvas canvas(window.x_min - pad_x, window.x_max + pad_x, window.y_min - pad_y,
                           window.y_max + pad_y, 640, 640);
    canvas.frame(window, "#555555");
    for (std::size_t i = 0; i < branches.size(); ++i) {
        if (branches[i].stalled) {
            canvas.comment("branch " + std::to_string(i) + " stalled before leaving the window");
        }
        canvas.polyline(branches[i].points, "#1f77b4", 1.6, branches[i].stalled);
    }
    try {
        double diag = window.diagonal();
        for (const auto& d : infinity_singularities(f)) {
            double theta = d.vertical() ? 0.5 * std::numbers::pi : std::atan(d.slope->approx());
            char label[64];
            if (d.vertical()) {
                std::snprintf(label, sizeof(label), "vertical (m=%d)", d.multiplicity);
            } else {
                std::snprintf(label, sizeof(label), "slope %.4g (m=%d)", d.slope->approx(),
                              d.multiplicity);
            }
            for (double sgn : {1.0, -1.0}) {
                Point dir{sgn * std::cos(theta), sgn * std::sin(theta)};
                Point tip = ray_to_frame(window.center(), dir, window);
                Point base{tip.x - 0.05 * diag * dir.x, tip.y - 0.05 * diag * dir.y};
                canvas.line(base, tip, "#d62728", 2.2);
                if (sgn > 0) {
                    canvas.text({tip.x - 0.16 * diag * dir.x, tip.y - 0.12 * diag * dir.y}, label,
                                12, "#d62728");
                }
            }
        }
    } catch (const ConstantInputError&) {
        canvas.comment("constant polynomial: no directions at infinity");
    }
    if (!canvas.save(out_path)) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 1;
    }
    return 0;
}

int cmd_flow(const std::string& f_text, const std::string& p0_s, double tmax, bool backward,
             const std::string& out_path) {
    Polynomial f = parse_flag(f_text, "--f");
    Point p0 = parse_point(p0_s);
    if (!(tmax > 0) || !std::isfinite(tmax)) {
        std::cerr << "error: --tmax must be a positive finite number\n";
        return 1;
    }
    FlowTrajectory traj = integrate(hamiltonian_field(f), p0, backward ? -tmax : tmax);
    if (out_path.empty()) {
        write_trajectory_csv(std::cout, traj);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 1;
        }
        write_trajectory_csv(out, traj);
    }
    return 0;
}

int cmd_portrait(const std::string& f_text, const std::string& g_text,
                 const std::string& out_path) {
    Polynomial f = parse_flag(f_text, "--f");
    Polynomial g = parse_flag(g_text, "--g");
    svgplot::Canvas canvas(-1.18, 1.18, -1.18, 1.18, 640, 640);

    std::vector<Point> rim;
    for (int k = 0; k <= 256; ++k) {
        double a = 2.0 * std::numbers::pi * k / 256;
        rim.push_back({std::cos(a), std::sin(a)});
    }
    canvas.polyline(rim, "#222222", 1.4);

    auto compress = [](Point p) {
        double s = 1.0 / (1.0 + norm(p));
        return Point{p.x * s, p.y * s};
    };

    const Window trace_win{-30, 30, -30, 30};
    const Window probe{-5, 5, -5, 5};
    struct Layer {
        const Polynomial* poly;
        const char* color;
    };
    const Layer layers[] = {{&f, "#1f77b4"}, {&g, "#d95f02"}};
    for (const Layer& layer : layers) {
        CompiledPoly cp(*layer.poly);
        double lo = cp(probe.x_min, probe.y_min), hi = lo;
        for (int j = 0; j <= 32; ++j) {
            for (int i = 0; i <= 32; ++i) {
                double v = cp(probe.x_min + probe.width() * i / 32.0,
                              probe.y_min + probe.height() * j / 32.0);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        for (int k = 0; k < 7; ++k) {
            double u = hi > lo ? lo + (hi - lo) * k / 6.0 : lo;
            for (const auto& branch : trace_level(*layer.poly, u, trace_win)) {
                std::vector<Point> disc;
                disc.reserve(branch.points.size());
                for (Point p : branch.points) disc.push_back(compress(p));
                canvas.polyline(disc, layer.color, 1.1);
            }
            if (hi <= lo) break;
        }
    }

    for (int which = 0; which < 2; ++which) {
        const Polynomial& p = which == 0 ? f : g;
        try {
            for (const auto& d : infinity_singularities(p)) {
                double theta =
                    d.vertical() ? 0.5 * std::numbers::pi : std::atan(d.slope->approx());
                for (double sgn : {1.0, -1.0}) {
                    Point at{sgn * std::cos(theta), sgn * std::sin(theta)};
                    if (which == 0) {
                        canvas.circle(at, 5.0, "#1f77b4", "#10395c");
                    } else {
                        canvas.square(at, 4.5, "white", "#d95f02");
                    }
                }
            }
        } catch (const ConstantInputError&) {
            canvas.comment("constant polynomial: no directions at infinity");
        }
    }
    canvas.text({-1.14, 1.10}, "f: blue curves, filled marks", 13, "#1f77b4");
    canvas.text({-1.14, 1.00}, "g: orange curves, open marks", 13, "#d95f02");

    if (!canvas.save(out_path)) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 1;
    }
    return 0;
}

int cmd_verify(const std::string& suite) {
    if (suite != "paper") {
        std::cerr << "error: unknown suite '" << suite << "' (available: paper)\n";
        return 1;
    }
    auto results = run_acceptance_suite();
    for (const auto& r : results) {
        std::printf("%d  %-24s  %s  %8.2fs  %s\n", r.index, r.name.c_str(),
                    r.passed ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    }
    bool ok = all_passed(results);
    std::printf("%s\n", ok ? "all criteria passed" : "some criteria FAILED");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"laboratory for planar polynomial maps: verdict reports, level sets, flows"};
    app.require_subcommand(1);

    std::string f_text, g_text, window_s = "-10,10,-10,10", json_path, out_path;
    std::string format = "csv", p0_s, suite;
    double level = 0.0, tmax = 1.0;
    bool backward = false;

    CLI::App* a = app.add_subcommand("analyze", "structured verdict report for a map (f, g)");
    a->add_option("--f", f_text, "first component polynomial")->required();
    a->add_option("--g", g_text, "second component polynomial")->required();
    a->add_option("--window", window_s, "xmin,xmax,ymin,ymax (default -10,10,-10,10)");
    a->add_option("--json", json_path, "write the JSON report to this path instead of stdout");

    CLI::App* l = app.add_subcommand("levelset", "trace one level curve of f");
    l->add_option("--f", f_text, "polynomial")->required();
    l->add_option("--level", level, "level value u")->required();
    l->add_option("--window", window_s, "xmin,xmax,ymin,ymax");
    l->add_option("--out", out_path, "output file")->required();
    l->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));

    CLI::App* fl = app.add_subcommand("flow", "integrate the hamiltonian field of f");
    fl->add_option("--f", f_text, "polynomial")->required();
    fl->add_option("--p0", p0_s, "start point x,y")->required();
    fl->add_option("--tmax", tmax, "integration time (positive)")->required();
    fl->add_flag("--backward", backward, "integrate backward in time");
    fl->add_option("--out", out_path, "CSV output file (default stdout)");

    CLI::App* po = app.add_subcommand("portrait", "disc portrait of both hamiltonian fields");
    po->add_option("--f", f_text, "first polynomial")->required();
    po->add_option("--g", g_text, "second polynomial")->required();
    po->add_option("--out", out_path, "SVG output file")->required();

    CLI::App* v = app.add_subcommand("verify", "run an acceptance suite");
    v->add_option("--suite", suite, "suite name (paper)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(a)) return cmd_analyze(f_text, g_text, window_s, json_path);
        if (app.got_subcommand(l)) return cmd_levelset(f_text, level, window_s, out_path, format);
        if (app.got_subcommand(fl)) return cmd_flow(f_text, p0_s, tmax, backward, out_path);
        if (app.got_subcommand(po)) return cmd_portrait(f_text, g_text, out_path);
        if (app.got_subcommand(v)) return cmd_verify(suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
