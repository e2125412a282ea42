#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sfcscan/bench.hpp"
#include "sfcscan/error.hpp"
#include "sfcscan/experiments.hpp"
#include "sfcscan/io.hpp"
#include "sfcscan/metrics.hpp"
#include "sfcscan/random.hpp"
#include "sfcscan/render.hpp"
#include "sfcscan/scan_order.hpp"
#include "sfcscan/ssm.hpp"

namespace sfcscan::cli {

namespace {

// Bad flag values detected after CLI11 parsing; reported like parse errors.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 7;
    std::string out;
    std::string format = "csv";
};

template <typename T, typename Fn>
std::vector<T> parse_list(const std::string& text, Fn&& parse_one) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(parse_one(item));
        } catch (const std::exception& e) {
            throw UsageError("bad list element '" + item + "': " + e.what());
        }
    }
    if (out.empty()) throw UsageError("empty list '" + text + "'");
    return out;
}

std::vector<Family> parse_families(const std::string& text) {
    if (text == "all") return {std::begin(kAllFamilies), std::end(kAllFamilies)};
    return parse_list<Family>(text, [](const std::string& s) { return parse_family(s); });
}

GridShape parse_shape_arg(const std::string& text) {
    try {
        return parse_shape(text);
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::int64_t> parse_ints(const std::string& text) {
    return parse_list<std::int64_t>(text, [](const std::string& s) {
        std::size_t pos = 0;
        const auto v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("not an integer");
        return v;
    });
}

std::vector<double> parse_reals(const std::string& text) {
    return parse_list<double>(text, [](const std::string& s) {
        std::size_t pos = 0;
        const auto v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("not a number");
        return v;
    });
}

class Output {
public:
    Output(const Globals& g, std::ostream& out) : path_(g.out), out_(out) {}

    std::ostream& stream() { return buffer_; }

    void flush() {
        if (path_.empty()) {
            out_ << buffer_.str();
            out_.flush();
        } else {
            write_file_atomic(path_, buffer_.str());
        }
    }

private:
    std::string path_;
    std::ostream& out_;
    std::ostringstream buffer_;
};

// Where a command gets its scan orders: a saved order file, or families
// generated on a shape.
struct OrderSource {
    std::string order_file;
    std::string families = "hilbert";
    std::string size = "64";
    std::int64_t window = kDefaultLocalWindow;
    bool reversed = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--order", order_file, "Scan order file written by 'scan gen'");
        cmd->add_option("--family", families,
                        "Comma-separated families: raster,continuous,local,hilbert,peano or all");
        cmd->add_option("--size", size, "Grid size HxW or N");
        cmd->add_option("--window", window, "Local scan window")->check(CLI::PositiveNumber);
        cmd->add_flag("--reversed", reversed, "Traverse back to front");
    }

    std::vector<ScanOrder> resolve() const {
        if (!order_file.empty()) return {load_order(order_file)};
        const auto shape = parse_shape_arg(size);
        std::vector<ScanOrder> orders;
        for (Family f : parse_families(families)) {
            orders.push_back(make_order(f, shape, {.window = window, .reversed = reversed}));
        }
        return orders;
    }
};

struct Sampling {
    std::optional<std::size_t> prefix;
    std::optional<double> fraction;
    std::optional<std::size_t> stride;

    void add_to(CLI::App* cmd) {
        auto* p = cmd->add_option("--prefix", prefix, "Use the first m cells");
        auto* f = cmd->add_option("--fraction", fraction, "Use the first fraction of cells");
        auto* s = cmd->add_option("--stride", stride, "Use every stride-th cell");
        p->excludes(f)->excludes(s);
        f->excludes(s);
    }

    SampleSet select(const ScanOrder& order) const {
        try {
            if (prefix) return prefix_samples(order, *prefix);
            if (fraction) return prefix_samples(order, prefix_length(order.shape(), *fraction));
            if (stride) return strided_samples(order, *stride);
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
        return prefix_samples(order, order.size());
    }
};

void setup_scan(CLI::App& app, Globals& g, std::ostream& out, int& status) {
    auto* scan = app.add_subcommand("scan", "Generate and render scan orders");
    scan->require_subcommand(1);

    auto* gen = scan->add_subcommand("gen", "Write a scan order in the text format");
    auto gen_src = std::make_shared<OrderSource>();
    gen->add_option("--family", gen_src->families, "Scan family")->required();
    gen->add_option("--size", gen_src->size, "Grid size HxW or N")->required();
    gen->add_option("--window", gen_src->window, "Local scan window")->check(CLI::PositiveNumber);
    gen->add_flag("--reversed", gen_src->reversed, "Traverse back to front");
    gen->callback([&g, &out, &status, gen_src] {
        const auto orders = gen_src->resolve();
        if (orders.size() != 1) throw UsageError("scan gen takes exactly one family");
        Output o(g, out);
        write_order(o.stream(), orders.front());
        o.flush();
        status = kExitOk;
    });

    auto* render = scan->add_subcommand("render", "Draw a scan order as SVG or PPM");
    auto render_src = std::make_shared<OrderSource>();
    render_src->add_to(render);
    auto spec = std::make_shared<RenderSpec>();
    auto image = std::make_shared<std::string>();
    auto color = std::make_shared<std::string>();
    render->add_option("--image", *image, "svg or ppm (default: from --out extension, else svg)")
        ->check(CLI::IsMember({"svg", "ppm"}));
    render->add_option("--cell", spec->cell_size, "Pixels per cell")->check(CLI::PositiveNumber);
    render->add_option("--stroke", spec->stroke, "Line width in pixels")->check(CLI::PositiveNumber);
    render->add_option("--color", *color, "Line colour as RRGGBB hex");
    render->callback([&g, &out, &status, render_src, spec, image, color] {
        const auto orders = render_src->resolve();
        if (orders.size() != 1) throw UsageError("scan render takes exactly one family");
        RenderSpec rs = *spec;
        std::string kind = *image;
        if (kind.empty()) {
            kind = std::filesystem::path(g.out).extension() == ".ppm" ? "ppm" : "svg";
        }
        rs.format = kind == "ppm" ? RenderFormat::Ppm : RenderFormat::Svg;
        if (!color->empty()) {
            try {
                rs.color = static_cast<std::uint32_t>(std::stoul(*color, nullptr, 16));
            } catch (const std::exception&) {
                throw UsageError("bad --color '" + *color + "'");
            }
        }
        Output o(g, out);
        o.stream() << (rs.format == RenderFormat::Svg ? render_svg(orders.front(), rs)
                                                      : render_ppm(orders.front(), rs));
        o.flush();
        status = kExitOk;
    });
}

void setup_metrics(CLI::App& app, Globals& g, std::ostream& out, int& status) {
    auto* metrics = app.add_subcommand("metrics", "Dispersion, jump and box-counting metrics");
    metrics->require_subcommand(1);

    struct Opts {
        OrderSource src;
        Sampling sampling;
        std::string norm = "euclidean";
        std::string scales;
    };

    auto add = [&](const char* name, const char* help, bool with_norm, bool with_scales,
                   bool with_sampling) {
        auto* cmd = metrics->add_subcommand(name, help);
        auto opts = std::make_shared<Opts>();
        opts->src.add_to(cmd);
        if (with_sampling) opts->sampling.add_to(cmd);
        if (with_norm) {
            cmd->add_option("--norm", opts->norm, "euclidean, manhattan or chebyshev")
                ->check(CLI::IsMember({"euclidean", "manhattan", "chebyshev"}));
        }
        if (with_scales) cmd->add_option("--scales", opts->scales, "Box sizes, e.g. 2,4,8,16,32");
        cmd->callback([&g, &out, &status, opts] {
            const auto orders = opts->src.resolve();
            Output o(g, out);
            o.stream() << kMetricCsvHeader << '\n';
            for (const auto& order : orders) {
                const auto scales = opts->scales.empty() ? default_box_scales(order.shape())
                                                         : parse_ints(opts->scales);
                const auto samples = opts->sampling.select(order);
                write_metric_csv_row(o.stream(), make_metric_report(order, samples, scales,
                                                                    parse_norm(opts->norm)));
            }
            o.flush();
            status = kExitOk;
        });
    };
    add("dispersion", "Dispersion of a sample set drawn from a scan order", true, false, true);
    add("jumps", "Index-jump statistics of a scan order", false, false, false);
    add("boxdim", "Box-counting dimension of a sample set drawn from a scan order", false, true,
        true);
}

void setup_ssm(CLI::App& app, Globals& g, std::ostream& out, int& status) {
    auto* ssm = app.add_subcommand("ssm", "Selective state-space scan over a grid");
    ssm->require_subcommand(1);
    auto* demo = ssm->add_subcommand("demo", "Run one selective scan per family over a field");

    struct Opts {
        std::string families = "all";
        std::string size = "32";
        std::int64_t state_dim = 4;
        std::int64_t window = kDefaultLocalWindow;
        std::string params;
        std::string dump_params;
        std::string input;
        std::string pgm_dir;
    };
    auto opts = std::make_shared<Opts>();
    demo->add_option("--family", opts->families, "Comma-separated families or all");
    demo->add_option("--size", opts->size, "Grid size for the synthetic field");
    demo->add_option("--state-dim", opts->state_dim, "Hidden dimension m")
        ->check(CLI::Range(1, 16));
    demo->add_option("--window", opts->window, "Local scan window")->check(CLI::PositiveNumber);
    demo->add_option("--params", opts->params, "SSM parameter file (JSON)");
    demo->add_option("--dump-params", opts->dump_params, "Write the parameters used");
    demo->add_option("--input", opts->input, "Input PGM instead of a synthetic field");
    demo->add_option("--pgm-dir", opts->pgm_dir, "Write <family>.pgm outputs (rescaled to [0,1])");
    demo->callback([&g, &out, &status, opts] {
        SsmConfig cfg;
        if (!opts->params.empty()) {
            cfg = load_ssm_config(opts->params);
        } else {
            cfg.base = ContinuousSSM::random_diagonal(opts->state_dim, derive_seed(g.seed, 1));
            cfg.selective = SelectiveParams::random(cfg.base, 1, derive_seed(g.seed, 2));
        }
        if (!opts->dump_params.empty()) write_file_atomic(opts->dump_params, dump_ssm_config(cfg));

        const ScalarField field =
            opts->input.empty()
                ? make_holder_field(parse_shape_arg(opts->size), 0.5, derive_seed(g.seed, 3)).values
                : read_pgm(opts->input);
        const auto raster = scan_over_grid(raster_order(field.shape()), field, cfg.selective, cfg.base);

        Output o(g, out);
        o.stream() << "family,H,W,state_dim,out_mean,out_rms,max_abs_diff_vs_raster\n";
        for (Family f : parse_families(opts->families)) {
            const auto order = make_order(f, field.shape(), {.window = opts->window});
            const auto y = scan_over_grid(order, field, cfg.selective, cfg.base);
            double sum = 0, sq = 0, diff = 0;
            for (std::size_t k = 0; k < y.shape().cells(); ++k) {
                sum += y[k];
                sq += y[k] * y[k];
                diff = std::max(diff, std::abs(y[k] - raster[k]));
            }
            const auto n = static_cast<double>(y.shape().cells());
            o.stream() << family_name(f) << ',' << field.shape().height() << ','
                       << field.shape().width() << ',' << cfg.base.dim() << ','
                       << format_real(sum / n) << ',' << format_real(std::sqrt(sq / n)) << ','
                       << format_real(diff) << '\n';
            if (!opts->pgm_dir.empty()) {
                ScalarField scaled = y;
                const auto [lo, hi] = std::minmax_element(y.values().begin(), y.values().end());
                const double span = *hi - *lo;
                for (double& v : scaled.values()) v = span > 0 ? (v - *lo) / span : 0.0;
                write_pgm(scaled, (std::filesystem::path(opts->pgm_dir) /
                                   (std::string(family_name(f)) + ".pgm"))
                                      .string());
            }
        }
        o.flush();
        status = kExitOk;
    });
}

void setup_study(CLI::App& app, Globals& g, std::ostream& out, std::ostream& err, int& status) {
    auto* study = app.add_subcommand("study", "Reproducible experiments");
    study->require_subcommand(1);
    auto* interp = study->add_subcommand(
        "interp", "Nearest-neighbour interpolation error from scan-prefix samples");

    struct Opts {
        std::string config;
        std::string grids, families, alphas, fractions;
        std::optional<std::int64_t> trials, window;
    };
    auto opts = std::make_shared<Opts>();
    interp->add_option("--config", opts->config, "Study config file (key = value)");
    interp->add_option("--grid", opts->grids, "Grid sizes, comma separated (HxW or N)");
    interp->add_option("--families", opts->families, "Families, comma separated or all");
    interp->add_option("--alpha", opts->alphas, "Hoelder exponents, comma separated");
    interp->add_option("--fraction", opts->fractions, "Prefix fractions, comma separated");
    interp->add_option("--trials", opts->trials, "Trials per configuration");
    interp->add_option("--window", opts->window, "Local scan window");
    interp->callback([&g, &out, &err, &status, opts, interp] {
        StudyConfig cfg;
        if (!opts->config.empty()) cfg = parse_study_config(read_file(opts->config));
        if (!opts->grids.empty()) {
            cfg.shapes.clear();
            for (const auto& s : parse_list<std::string>(opts->grids, [](auto& x) { return x; })) {
                cfg.shapes.push_back(parse_shape_arg(s));
            }
        }
        if (!opts->families.empty()) cfg.families = parse_families(opts->families);
        if (!opts->alphas.empty()) cfg.alphas = parse_reals(opts->alphas);
        if (!opts->fractions.empty()) cfg.fractions = parse_reals(opts->fractions);
        if (opts->trials) cfg.trials = *opts->trials;
        if (opts->window) cfg.window = *opts->window;
        if (interp->get_parent()->get_parent()->count("--seed") || opts->config.empty()) {
            cfg.seed = g.seed;
        }
        for (double a : cfg.alphas) {
            if (!(a > 0.0 && a <= 1.0)) throw UsageError("--alpha values must lie in (0, 1]");
        }
        for (double f : cfg.fractions) {
            if (!(f > 0.0 && f <= 1.0)) throw UsageError("--fraction values must lie in (0, 1]");
        }
        if (cfg.trials < 1) throw UsageError("--trials must be >= 1");

        const auto rows = run_interp_study(cfg);
        Output o(g, out);
        write_study_csv(o.stream(), rows);
        o.flush();

        const bool has_raster =
            std::find(cfg.families.begin(), cfg.families.end(), Family::Raster) != cfg.families.end();
        if (has_raster) {
            for (const auto& shape : cfg.shapes) {
                for (double a : cfg.alphas) {
                    for (double f : cfg.fractions) {
                        for (Family fam : cfg.families) {
                            if (fam == Family::Raster) continue;
                            err << family_name(fam) << " beats raster on max error in "
                                << count_max_error_wins(rows, fam, Family::Raster, shape, a, f)
                                << "/" << cfg.trials << " trials (grid " << shape.to_string()
                                << ", alpha " << format_real(a) << ", fraction " << format_real(f)
                                << ")\n";
                        }
                    }
                }
            }
        }
        status = kExitOk;
    });
}

void setup_bench(CLI::App& app, Globals& g, std::ostream& out, int& status) {
    auto* bench = app.add_subcommand("bench", "Time order generation and scan throughput");
    struct Opts {
        std::string sizes = "64,256,1024";
        std::string families = "all";
        int reps = 5;
        std::int64_t scan_size = 256;
        std::int64_t state_dim = 4;
    };
    auto opts = std::make_shared<Opts>();
    bench->add_option("--sizes", opts->sizes, "Square grid sides for order generation");
    bench->add_option("--families", opts->families, "Families, comma separated or all");
    bench->add_option("--reps", opts->reps, "Repetitions per case (>= 5)")->check(CLI::Range(5, 1000));
    bench->add_option("--scan-size", opts->scan_size, "Grid side for the scan cases")
        ->check(CLI::PositiveNumber);
    bench->add_option("--state-dim", opts->state_dim, "Hidden dimension for the scan cases")
        ->check(CLI::Range(1, 16));
    bench->callback([&g, &out, &status, opts] {
        BenchConfig cfg;
        cfg.sizes = parse_ints(opts->sizes);
        for (auto s : cfg.sizes) {
            if (s < 1) throw UsageError("--sizes must be positive");
        }
        cfg.families = parse_families(opts->families);
        cfg.reps = opts->reps;
        cfg.scan_size = opts->scan_size;
        cfg.state_dim = opts->state_dim;
        cfg.seed = g.seed;
        Output o(g, out);
        write_bench_csv(o.stream(), run_bench(cfg));
        o.flush();
        status = kExitOk;
    });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Space-filling-curve scan orders, dispersion metrics and selective scans",
                 "sfcscan"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Seed for every randomized component");
    app.add_option("--out", g.out, "Write results to this file instead of standard output");
    app.add_option("--format", g.format, "Tabular output format")->check(CLI::IsMember({"csv"}));

    int status = kExitOk;
    setup_scan(app, g, out, status);
    setup_metrics(app, g, out, status);
    setup_ssm(app, g, out, status);
    setup_study(app, g, out, err, status);
    setup_bench(app, g, out, status);
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* leaf : sub->get_subcommands({})) leaf->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return status;
}

}  // namespace sfcscan::cli
