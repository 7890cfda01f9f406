#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "curvlab/profile.hpp"

namespace curvlab {

namespace {

struct Table {
    std::string header;
    std::vector<double> x;
    std::vector<double> y;
};

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
}

Table read_table(const std::string& text, const std::string& label) {
    std::istringstream in(text);
    std::string line;
    Table table;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (table.header.empty()) {
            table.header = line;
            if (line != "r,w" && line != "s,f") {
                throw Error(ErrorCode::InvalidInput, label + ": header must be `r,w` or `s,f`, got `" + line + "`");
            }
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorCode::InvalidInput, label + ":" + std::to_string(line_no) + ": expected two columns");
        }
        std::size_t used_x = 0;
        std::size_t used_y = 0;
        const std::string xs = trim(line.substr(0, comma));
        const std::string ys = trim(line.substr(comma + 1));
        double x = 0.0;
        double y = 0.0;
        try {
            x = std::stod(xs, &used_x);
            y = std::stod(ys, &used_y);
        } catch (const std::exception&) {
            used_x = 0;
        }
        if (used_x != xs.size() || used_y != ys.size() || xs.empty() || ys.empty() || !std::isfinite(x) ||
            !std::isfinite(y)) {
            throw Error(ErrorCode::InvalidInput, label + ":" + std::to_string(line_no) + ": malformed number");
        }
        if (!table.x.empty() && !(x > table.x.back())) {
            throw Error(ErrorCode::InvalidInput,
                        label + ":" + std::to_string(line_no) + ": first column must be strictly increasing");
        }
        table.x.push_back(x);
        table.y.push_back(y);
    }
    if (table.header.empty()) throw Error(ErrorCode::InvalidInput, label + ": empty profile table");
    if (table.x.size() < 4) throw Error(ErrorCode::InvalidInput, label + ": need at least 4 rows");
    return table;
}

/// Natural cubic spline over the table with a C^1 analytic continuation
/// past the last knot.
class Spline {
public:
    Spline(const std::vector<double>& x, const std::vector<double>& y)
        : spline_(gsl_spline_alloc(gsl_interp_cspline, x.size()), gsl_spline_free),
          x_(x),
          y_(y) {
        static const bool handler_off = [] {
            gsl_set_error_handler_off();
            return true;
        }();
        (void)handler_off;
        if (!spline_ || gsl_spline_init(spline_.get(), x_.data(), y_.data(), x_.size()) != GSL_SUCCESS) {
            throw Error(ErrorCode::InvalidInput, "spline construction failed");
        }
    }

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

    // The GSL evaluators accept a null accelerator (binary search), which
    // keeps evaluation thread-safe.
    double value(double x) const { return gsl_spline_eval(spline_.get(), x, nullptr); }
    double d1(double x) const { return gsl_spline_eval_deriv(spline_.get(), x, nullptr); }
    double d2(double x) const { return gsl_spline_eval_deriv2(spline_.get(), x, nullptr); }

private:
    std::shared_ptr<gsl_spline> spline_;
    std::vector<double> x_;
    std::vector<double> y_;
};

MetricProfile from_conformal_table(const Table& table, const std::string& label, bool assume_nonneg) {
    for (double w : table.y) {
        if (!(w > 0.0)) throw Error(ErrorCode::InvalidInput, label + ": conformal factor must be positive");
    }
    if (table.x.front() < 0.0) throw Error(ErrorCode::InvalidInput, label + ": radius must be >= 0");
    auto spline = std::make_shared<Spline>(table.x, table.y);
    const double r_last = spline->back();
    const double w_last = spline->value(r_last);
    const double dw_last = spline->d1(r_last);
    // Harmonic continuation alpha + beta / r matching value and slope.
    const double beta = -dw_last * r_last * r_last;
    const double alpha = w_last - beta / r_last;
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidInput, label + ": table does not flatten out at its end");

    ConformalProfile c;
    c.factor = [spline, r_last, alpha, beta](double r) {
        if (r > r_last) return ConformalSample{alpha + beta / r, -beta / (r * r), 2.0 * beta / (r * r * r)};
        return ConformalSample{spline->value(r), spline->d1(r), spline->d2(r)};
    };
    c.r_min = table.x.front();
    // In coordinates y = alpha^2 x the continuation reads (1 + alpha beta / |y|)^4.
    c.mass_tag = 2.0 * alpha * beta;
    c.label = label;
    c.assume_nonnegative_R = assume_nonneg;
    return to_warped(c);
}

MetricProfile from_warp_table(const Table& table, const std::string& label, bool assume_nonneg) {
    if (table.x.front() < 0.0) throw Error(ErrorCode::InvalidInput, label + ": arclength must be >= 0");
    for (std::size_t i = 1; i < table.y.size(); ++i) {
        if (!(table.y[i] > 0.0)) throw Error(ErrorCode::InvalidInput, label + ": warp factor must be positive");
    }
    auto spline = std::make_shared<Spline>(table.x, table.y);
    const double s_last = spline->back();
    const double f_last = spline->value(s_last);
    const double slope = spline->d1(s_last);
    if (!(slope > 0.0)) throw Error(ErrorCode::NonConvergent, label + ": warp factor must grow at the table end");

    MetricProfile::Options options;
    options.assume_nonnegative_R = assume_nonneg;
    options.asymptotically_flat = std::abs(slope - 1.0) < 1e-3;
    const bool pole = table.y.front() == 0.0;
    return MetricProfile(
        [spline, s_last, f_last, slope](double s) {
            if (s > s_last) return ChartSample{f_last + slope * (s - s_last), slope, 0.0, 1.0, 0.0};
            return ChartSample{spline->value(s), spline->d1(s), spline->d2(s), 1.0, 0.0};
        },
        table.x.front(), pole ? ProfileKind::Boundaryless : ProfileKind::WithBoundary, label, std::move(options));
}

}  // namespace

MetricProfile parse_profile_csv(const std::string& text, const std::string& label, bool assume_nonnegative_R) {
    const Table table = read_table(text, label);
    if (table.header == "r,w") return from_conformal_table(table, label, assume_nonnegative_R);
    return from_warp_table(table, label, assume_nonnegative_R);
}

MetricProfile load_profile_csv(const std::string& path, bool assume_nonnegative_R) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open profile " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_profile_csv(buffer.str(), "custom(" + path + ")", assume_nonnegative_R);
}

}  // namespace curvlab
