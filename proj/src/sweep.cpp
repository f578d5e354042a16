#include "bvm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "bvm/distances.hpp"
#include "bvm/stats.hpp"

namespace bvm {

namespace {

Metric metric_from(const std::string& s) {
    if (s == "tv") return Metric::TV;
    if (s == "wass") return Metric::Wass;
    return Metric::SmoothH;
}

StdKind kind_from(const std::string& s) {
    return s == "mle" ? StdKind::Mle : StdKind::Mode;
}

}  // namespace

std::string sweep_csv_header() {
    return "n,theorem,metric,standardization,bound,clamped,oracle,rel_err,"
           "bound_se,oracle_se,seed";
}

std::string sweep_csv_row(const SweepRow& r) {
    char buf[360];
    std::snprintf(buf, sizeof buf,
                  "%zu,%s,%s,%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%llu", r.n,
                  r.theorem.c_str(), to_string(r.metric),
                  to_string(r.standardization), r.bound, r.clamped, r.oracle,
                  r.rel_err, r.bound_se, r.oracle_se,
                  static_cast<unsigned long long>(r.seed));
    return buf;
}

OraclePair oracle_distances(const ExampleSpec& ex, const DataSummary& summary,
                            StdKind kind, const SweepConfig& cfg) {
    const std::unique_ptr<PosteriorDist> post = ex.exact_posterior(summary);
    const Standardization s = ex.closed_standardization(summary, kind);
    OraclePair out;

    if (post->dim() == 1) {
        const Pushforward1D push = pushforward_1d(*post, s);
        auto pw = push.window();
        const std::array<double, 2> window{std::min(pw[0], -10.0),
                                           std::max(pw[1], 10.0)};
        const DistanceEstimate tv = tv_1d([&](double w) { return push.pdf(w); },
                                          normal_pdf, window);
        const DistanceEstimate ws = wass_1d([&](double w) { return push.cdf(w); },
                                            normal_cdf, window);
        out.tv = tv.value;
        out.tv_err = tv.error_bar;
        out.wass = ws.value;
        out.wass_err = ws.error_bar;
        return out;
    }

    // 2-D: TV by tensor quadrature of the pushforward density, W1 empirical.
    const Standardization* sp = &s;
    const Pushforward2D push{post.get(), sp};
    std::vector<std::array<double, 2>> box{{-9.0, 9.0}, {-9.0, 9.0}};
    const DistanceEstimate tv = tv_2d(
        [&](const std::vector<double>& w) { return push.pdf(w); },
        [](const std::vector<double>& w) { return std_normal_pdf_k(w); }, box, 200);
    out.tv = tv.value;
    out.tv_err = tv.error_bar;

    PointSampler sample_post = [&](CounterRng& rng, std::vector<double>& x) {
        static thread_local std::vector<double> theta;
        post->sample(rng, theta);
        x = s.forward(theta);
    };
    PointSampler sample_normal = [](CounterRng& rng, std::vector<double>& x) {
        x.assign({rng.normal(), rng.normal()});
    };
    const DistanceEstimate ws =
        wass_empirical(sample_post, sample_normal, 2, cfg.empirical_batch,
                       cfg.empirical_reps, cfg.seed + 1);
    out.wass = ws.value;
    out.wass_err = ws.error_bar;
    out.wass_is_band = true;
    return out;
}

SweepResult run_sweep(const SweepConfig& cfg) {
    if (cfg.n_grid.empty()) throw ConfigError("n_grid must not be empty");
    if (!std::is_sorted(cfg.n_grid.begin(), cfg.n_grid.end()))
        throw ConfigError("n_grid must be sorted ascending");

    const ExampleSpec ex(cfg.example);
    CounterRng data_rng(cfg.seed, 0);
    std::vector<std::vector<double>> data;
    ex.sample_data(data_rng, cfg.n_grid.back(), data);
    const ModelPrior mp = ex.model_prior();

    SweepResult result;
    std::ostringstream csv;
    csv << sweep_csv_header() << "\n";

    try {
        for (std::size_t n : cfg.n_grid) {
            const std::vector<std::vector<double>> prefix(data.begin(),
                                                          data.begin() + n);
            const DataSummary summary = summarize(mp.model, prefix);

            ExpectOptions eo = cfg.expect;
            eo.seed = cfg.seed;
            std::vector<ClosedBound> bounds = ex.closed_bounds(summary, eo);

            // the negative binomial example has only a TV formula; pair it
            // with the generic univariate Wasserstein bound from the engine
            if (cfg.example.family == Family::NegBin) {
                const PosteriorContext ctx =
                    build_context(mp.model, mp.prior, summary);
                const std::unique_ptr<PosteriorDist> post =
                    ex.exact_posterior(summary);
                EngineOptions engine;
                engine.expect = eo;
                const BoundReport uw = bound_mode_univariate(
                    ctx, *post, UniVariant::Wass, 0.0, engine);
                bounds.push_back(
                    {uw.theorem, uw.metric, uw.standardization, uw.value});
            }

            std::map<StdKind, OraclePair> oracles;
            for (const ClosedBound& cb : bounds)
                if (!cb.lower && !oracles.count(cb.kind))
                    oracles[cb.kind] = oracle_distances(ex, summary, cb.kind, cfg);

            for (const ClosedBound& cb : bounds) {
                if (cb.lower) continue;  // lower bounds are not Fig.-1 curves
                if (cb.metric == Metric::SmoothH) continue;
                const OraclePair& op = oracles[cb.kind];
                SweepRow row;
                row.n = n;
                row.theorem = cb.theorem;
                row.metric = cb.metric;
                row.standardization = cb.kind;
                row.bound = cb.value;
                row.clamped =
                    cb.metric == Metric::TV ? std::min(cb.value, 1.0) : cb.value;
                row.oracle = cb.metric == Metric::TV ? op.tv : op.wass;
                row.oracle_se = cb.metric == Metric::TV ? op.tv_err : op.wass_err;
                row.rel_err = row.oracle > 0.0
                                  ? std::abs(row.bound - row.oracle) / row.oracle
                                  : 0.0;
                row.seed = cfg.seed;
                result.rows.push_back(row);
                csv << sweep_csv_row(row) << "\n";
            }
        }
    } catch (...) {
        csv << "# aborted: sweep incomplete\n";
        result.csv = csv.str();
        throw;
    }
    result.csv = csv.str();
    return result;
}

// ---------------------------------------------------------------------------
// CSV parsing (for the plot subcommand)
// ---------------------------------------------------------------------------

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    std::vector<SweepRow> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;
            if (line.rfind("n,", 0) == 0) continue;  // header
        }
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        fields.push_back(cur);
        if (fields.size() != 11) throw ConfigError("malformed sweep CSV row");
        SweepRow r;
        r.n = std::stoul(fields[0]);
        r.theorem = fields[1];
        r.metric = metric_from(fields[2]);
        r.standardization = kind_from(fields[3]);
        r.bound = std::stod(fields[4]);
        r.clamped = std::stod(fields[5]);
        r.oracle = std::stod(fields[6]);
        r.rel_err = std::stod(fields[7]);
        r.bound_se = std::stod(fields[8]);
        r.oracle_se = std::stod(fields[9]);
        r.seed = std::stoull(fields[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// SVG rendering
// ---------------------------------------------------------------------------

namespace {

struct Series {
    std::string label;
    std::string color;
    std::string dash;
    std::vector<std::pair<double, double>> points;  // (n, rel_err)
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string render_sweep_svg(const std::vector<SweepRow>& rows, bool log_y) {
    const int width = 720, height = 480;
    const int ml = 70, mr = 160, mt = 30, mb = 50;

    std::map<std::string, Series> series;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const SweepRow& r : rows) {
        const std::string key = r.theorem + "/" + to_string(r.metric);
        Series& s = series[key];
        if (s.points.empty()) {
            s.label = key;
            s.color = r.metric == Metric::Wass ? "#ff7f0e" : "#1f77b4";
            s.dash = r.standardization == StdKind::Mle ? "6,4" : "";
        }
        double y = r.rel_err;
        if (log_y) y = std::max(y, 1e-12);
        s.points.emplace_back(double(r.n), y);
        x_min = std::min(x_min, double(r.n));
        x_max = std::max(x_max, double(r.n));
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }
    if (series.empty()) throw ConfigError("no rows to plot");
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (log_y) {
        y_min = std::log10(std::max(y_min, 1e-12));
        y_max = std::log10(std::max(y_max, 1e-12));
    }
    if (y_max <= y_min) y_max = y_min + 1.0;
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    auto px = [&](double x) {
        return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
    };
    auto py = [&](double y) {
        if (log_y) y = std::log10(std::max(y, 1e-12));
        return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
        << width - mr << "\" y2=\"" << height - mb
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    // ticks
    for (int i = 0; i <= 5; ++i) {
        const double x = x_min + (x_max - x_min) * i / 5.0;
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << height - mb << "\" x2=\""
            << px(x) << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>"
            << "<text x=\"" << px(x) << "\" y=\"" << height - mb + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(x)
            << "</text>\n";
        const double yv = y_min + (y_max - y_min) * i / 5.0;
        const double y_label = log_y ? std::pow(10.0, yv) : yv;
        const double ypix =
            height - mb - (yv - y_min) / (y_max - y_min) * (height - mt - mb);
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << ypix << "\" x2=\"" << ml
            << "\" y2=\"" << ypix << "\" stroke=\"black\"/>"
            << "<text x=\"" << ml - 8 << "\" y=\"" << ypix + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y_label)
            << "</text>\n";
    }
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">n</text>\n";
    svg << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
        << "\" font-size=\"12\" transform=\"rotate(-90 18,"
        << (mt + height - mb) / 2 << ")\" text-anchor=\"middle\">relative error"
        << (log_y ? " (log)" : "") << "</text>\n";

    int legend_y = mt + 10;
    for (const auto& [key, s] : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\"";
        if (!s.dash.empty()) svg << " stroke-dasharray=\"" << s.dash << "\"";
        svg << " stroke-width=\"1.8\" points=\"";
        for (const auto& [x, y] : s.points) svg << px(x) << "," << py(y) << " ";
        svg << "\"/>\n";
        for (const auto& [x, y] : s.points)
            svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
                << "\" r=\"2.4\" fill=\"" << s.color << "\"/>\n";
        svg << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << legend_y
            << "\" x2=\"" << width - mr + 34 << "\" y2=\"" << legend_y
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
        if (!s.dash.empty()) svg << " stroke-dasharray=\"" << s.dash << "\"";
        svg << "/><text x=\"" << width - mr + 38 << "\" y=\"" << legend_y + 4
            << "\" font-size=\"10\">" << s.label << "</text>\n";
        legend_y += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace bvm
