#include "hypfill/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hypfill {

namespace {

double matrix_diameter(const Eigen::MatrixXd& d) {
    return d.size() == 0 ? 0.0 : d.maxCoeff();
}

void scan_violations(const Eigen::MatrixXd& d, double tol_abs,
                     ValidationReport& out) {
    const int n = static_cast<int>(d.rows());
    auto push = [&](MetricViolation v) {
        (v.magnitude > tol_abs ? out.errors : out.warnings).push_back(v);
    };
    for (int i = 0; i < n; ++i) {
        if (d(i, i) != 0.0)
            push({MetricViolation::Kind::Diagonal, i, i, -1, std::abs(d(i, i))});
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double gap = std::abs(d(i, j) - d(j, i));
            if (gap != 0.0)
                push({MetricViolation::Kind::Symmetry, i, j, -1, gap});
            if (d(i, j) <= 0.0)
                push({MetricViolation::Kind::Positivity, i, j, -1, -d(i, j)});
        }
    // Exhaustive triangle scan, all ordered triples via symmetry reduction:
    // d(i,j) <= d(i,k) + d(k,j) for every k distinct from both.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double slack = d(i, j) - d(i, k) - d(k, j);
                if (slack > 0.0)
                    push({MetricViolation::Kind::Triangle, i, j, k, slack});
            }
}

}  // namespace

std::string MetricViolation::describe(const FiniteMetricSpace& M) const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Diagonal:
            os << "nonzero diagonal at " << M.id(i);
            break;
        case Kind::Symmetry:
            os << "asymmetry between " << M.id(i) << " and " << M.id(j);
            break;
        case Kind::Positivity:
            os << "nonpositive distance between " << M.id(i) << " and " << M.id(j);
            break;
        case Kind::Triangle:
            os << "triangle violation d(" << M.id(i) << "," << M.id(j) << ") > d(.,"
               << M.id(k) << ") sum";
            break;
    }
    os << " (magnitude " << magnitude << ")";
    return os.str();
}

ValidationReport validate_metric(const Eigen::MatrixXd& d, double rel_tol) {
    ValidationReport rep;
    rep.tol_abs = rel_tol * matrix_diameter(d);
    if (d.rows() != d.cols())
        throw InputError("distance matrix is not square");
    scan_violations(d, rep.tol_abs, rep);
    return rep;
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<std::string> ids,
                                                 Eigen::MatrixXd d,
                                                 double rel_tol) {
    if (static_cast<int>(ids.size()) != d.rows())
        throw InputError("id count does not match matrix size");
    FiniteMetricSpace M;
    M.ids_ = std::move(ids);
    M.d_ = std::move(d);
    ValidationReport rep = validate_metric(M.d_, rel_tol);
    if (!rep.ok())
        throw InputError("metric validation failed: " + rep.errors.front().describe(M));
    // Violations within tolerance are tolerated but cleaned up so the rest
    // of the pipeline sees an exactly symmetric, nonnegative matrix.
    M.d_ = ((M.d_ + M.d_.transpose()) / 2.0).cwiseMax(0.0).eval();
    M.d_.diagonal().setZero();
    return M;
}

FiniteMetricSpace FiniteMetricSpace::from_points(std::vector<std::string> ids,
                                                 Eigen::MatrixXd coords,
                                                 PointMetric metric, double theta) {
    const int n = static_cast<int>(coords.rows());
    if (static_cast<int>(ids.size()) != n)
        throw InputError("id count does not match point count");
    if (!(theta > 0.0 && theta <= 1.0))
        throw InputError("snowflake exponent must lie in (0, 1]");
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const auto diff = (coords.row(i) - coords.row(j)).eval();
            double base = metric == PointMetric::Euclidean
                              ? diff.norm()
                              : diff.cwiseAbs().maxCoeff();
            if (base <= 0.0)
                throw InputError("duplicate points " + ids[i] + " and " + ids[j]);
            d(i, j) = d(j, i) = theta == 1.0 ? base : std::pow(base, theta);
        }
    }
    FiniteMetricSpace M = from_matrix(std::move(ids), std::move(d));
    M.coords_ = std::move(coords);
    return M;
}

double FiniteMetricSpace::diameter() const { return matrix_diameter(d_); }

double FiniteMetricSpace::min_positive_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (d_(i, j) > 0.0) best = std::min(best, d_(i, j));
    return best;
}

FiniteMetricSpace FiniteMetricSpace::scaled(double s) const {
    if (!(s > 0.0)) throw InputError("scale factor must be positive");
    FiniteMetricSpace M;
    M.ids_ = ids_;
    M.d_ = s * d_;
    return M;
}

FiniteMetricSpace FiniteMetricSpace::snowflaked(double theta) const {
    if (!(theta > 0.0 && theta <= 1.0))
        throw InputError("snowflake exponent must lie in (0, 1]");
    FiniteMetricSpace M;
    M.ids_ = ids_;
    M.d_ = d_.array().pow(theta).matrix();
    return M;
}

int FiniteMetricSpace::index_of(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
        if (ids_[i] == id) return i;
    return -1;
}

std::vector<int> maximal_separated_net(const FiniteMetricSpace& M, double r,
                                       const std::vector<int>& order) {
    if (!(r > 0.0)) throw InputError("net separation must be positive");
    std::vector<int> walk = order;
    if (walk.empty()) {
        walk.resize(M.size());
        for (int i = 0; i < M.size(); ++i) walk[i] = i;
    }
    std::vector<int> net;
    for (int p : walk) {
        bool far = true;
        for (int q : net)
            if (M.dist(p, q) < r) { far = false; break; }
        if (far) net.push_back(p);
    }
    return net;
}

std::vector<int> net_order(int n, std::uint64_t seed) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    if (seed != 0) {
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    return order;
}

ScaleStats scale_stats(const FiniteMetricSpace& M, double a, int max_levels) {
    if (!(a > 0.0 && a < 1.0)) throw InputError("scale base a must lie in (0, 1)");
    if (max_levels < 1) throw InputError("max_levels must be >= 1");
    ScaleStats s;
    s.diameter = M.diameter();
    s.min_positive = M.min_positive_distance();
    if (M.size() <= 1 || s.diameter == 0.0) {
        s.degenerate = true;
        s.suggested_n_min = 0;
        s.suggested_n_max = std::min(8, max_levels - 1);
        return s;
    }
    const double la = std::log(a);
    // Largest n with a^n > diameter: n strictly below log_a(diameter).
    double lo = std::log(s.diameter) / la;
    int n_min = static_cast<int>(std::floor(lo));
    if (std::pow(a, n_min) <= s.diameter) --n_min;  // guard rounding at exact powers
    while (std::pow(a, n_min + 1) > s.diameter) ++n_min;
    // Smallest n with a^n < min positive distance.
    double hi = std::log(s.min_positive) / la;
    int n_max = static_cast<int>(std::ceil(hi));
    if (std::pow(a, n_max) >= s.min_positive) ++n_max;
    while (std::pow(a, n_max - 1) < s.min_positive) --n_max;
    s.suggested_n_min = n_min;
    s.suggested_n_max = n_max;
    if (n_max - n_min + 1 > max_levels) {
        s.suggested_n_max = n_min + max_levels - 1;
        s.clamped = true;
    }
    return s;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

FiniteMetricSpace load_metric_csv(const std::string& path, double rel_tol) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty file");
    std::vector<std::string> ids = split_csv_row(line);
    if (!ids.empty() && ids.front().empty()) ids.erase(ids.begin());  // corner cell
    const int n = static_cast<int>(ids.size());
    if (n == 0) throw InputError(path + ": header row has no ids");
    Eigen::MatrixXd d(n, n);
    int row = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (row >= n) throw InputError(path + ": more rows than header ids");
        std::vector<std::string> cells = split_csv_row(line);
        if (static_cast<int>(cells.size()) == n + 1) {
            if (cells.front() != ids[row])
                throw InputError(path + ": row label '" + cells.front() +
                                 "' does not match header id '" + ids[row] + "'");
            cells.erase(cells.begin());
        }
        if (static_cast<int>(cells.size()) != n)
            throw InputError(path + ": row " + std::to_string(row + 1) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(n));
        for (int j = 0; j < n; ++j) {
            try {
                size_t used = 0;
                d(row, j) = std::stod(cells[j], &used);
                if (used != cells[j].size()) throw std::invalid_argument(cells[j]);
            } catch (const std::exception&) {
                throw InputError(path + ": bad number '" + cells[j] + "' at row " +
                                 std::to_string(row + 1));
            }
        }
        ++row;
    }
    if (row != n) throw InputError(path + ": expected " + std::to_string(n) +
                                   " data rows, found " + std::to_string(row));
    return FiniteMetricSpace::from_matrix(std::move(ids), std::move(d), rel_tol);
}

FiniteMetricSpace load_metric_points(const std::string& path,
                                     FiniteMetricSpace::PointMetric metric,
                                     double theta) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": JSON parse error: " + e.what());
    }
    if (!j.is_array() || j.empty())
        throw InputError(path + ": expected a nonempty array of points");
    std::vector<std::string> ids;
    std::vector<std::vector<double>> pts;
    for (const auto& p : j) {
        if (!p.contains("id") || !p.contains("coords"))
            throw InputError(path + ": each point needs 'id' and 'coords'");
        ids.push_back(p["id"].is_string() ? p["id"].get<std::string>()
                                          : p["id"].dump());
        pts.push_back(p["coords"].get<std::vector<double>>());
        if (pts.back().size() != pts.front().size())
            throw InputError(path + ": inconsistent coordinate dimensions");
    }
    Eigen::MatrixXd coords(pts.size(), pts.front().size());
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t k = 0; k < pts[i].size(); ++k)
            coords(static_cast<int>(i), static_cast<int>(k)) = pts[i][k];
    return FiniteMetricSpace::from_points(std::move(ids), std::move(coords), metric,
                                          theta);
}

}  // namespace hypfill
