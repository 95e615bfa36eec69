#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <queue>
#include <sstream>

#include "ccrbudget/errors.hpp"
#include "ccrbudget/linalg.hpp"

namespace ccrb {

namespace {

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half) and weights.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a = 0.0;
    double b = 0.0;
    CMatrix value;
    CMatrix error;  // entrywise |K15 - G7|
    double worst = 0.0;
};

struct WorstFirst {
    bool operator()(const Segment* x, const Segment* y) const { return x->worst < y->worst; }
};

class MappedIntegrand {
public:
    MappedIntegrand(const std::function<CMatrix(double)>& f, double scale)
        : f_(f), scale_(scale) {}

    // g(t) = f(omega(t)) d omega / dt with omega = s t / (1 - t^2).
    CMatrix operator()(double t) {
        ++evaluations;
        const double u = 1.0 - t * t;
        const double omega = scale_ * t / u;
        const double jac = scale_ * (1.0 + t * t) / (u * u);
        CMatrix v = f_(omega);
        v *= jac;
        return v;
    }

    std::size_t evaluations = 0;

private:
    const std::function<CMatrix(double)>& f_;
    double scale_;
};

Segment integrate_segment(MappedIntegrand& g, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    CMatrix fc = g(center);
    CMatrix kronrod = fc;
    kronrod *= kKronrodWeights[7];
    CMatrix gauss = fc;
    gauss *= kGaussWeights[3];
    for (std::size_t k = 0; k < 7; ++k) {
        const double dx = half * kKronrodNodes[k];
        CMatrix pair = g(center - dx) + g(center + dx);
        kronrod += kKronrodWeights[k] * pair;
        if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;

    Segment s;
    s.a = a;
    s.b = b;
    s.error = CMatrix(kronrod.rows(), kronrod.cols());
    for (std::size_t i = 0; i < kronrod.data().size(); ++i) {
        const double e = std::abs(kronrod.data()[i] - gauss.data()[i]);
        s.error.data()[i] = e;
        s.worst = std::max(s.worst, e);
    }
    s.value = std::move(kronrod);
    return s;
}

double to_compact(double omega, double scale) {
    if (omega == 0.0) return 0.0;
    // Positive root of omega t^2 + s t - omega = 0, written to avoid cancellation.
    const double w = omega / scale;
    return 2.0 * w / (1.0 + std::sqrt(1.0 + 4.0 * w * w));
}

}  // namespace

SpectrumIntegral integrate_spectrum(const std::function<CMatrix(double)>& f,
                                    const SpectrumQuadrature& options) {
    if (!(options.scale > 0.0)) throw Error("integrate_spectrum: scale must be positive");
    if (!(options.abs_tol > 0.0)) throw Error("integrate_spectrum: abs_tol must be positive");

    MappedIntegrand g(f, options.scale);

    std::vector<double> cuts;
    constexpr std::size_t kInitialPieces = 8;
    for (std::size_t k = 0; k <= kInitialPieces; ++k) {
        cuts.push_back(-1.0 + 2.0 * static_cast<double>(k) / kInitialPieces);
    }
    for (double w : options.breakpoints) {
        if (std::isfinite(w)) cuts.push_back(to_compact(w, options.scale));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-14; }),
               cuts.end());

    // The integral is scaled by 1/(2 pi) at the end; compare errors on that scale.
    const double inv2pi = 0.5 / std::numbers::pi;
    const double tol = options.abs_tol / inv2pi;

    std::vector<std::unique_ptr<Segment>> store;
    std::priority_queue<Segment*, std::vector<Segment*>, WorstFirst> queue;
    CMatrix total;
    CMatrix total_error;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        store.push_back(std::make_unique<Segment>(integrate_segment(g, cuts[k], cuts[k + 1])));
        Segment* s = store.back().get();
        if (total.empty()) {
            total = s->value;
            total_error = s->error;
        } else {
            total += s->value;
            total_error += s->error;
        }
        queue.push(s);
    }

    auto max_error = [&]() {
        double m = 0.0;
        for (const auto& v : total_error.data()) m = std::max(m, v.real());
        return m;
    };

    std::size_t subdivisions = 0;
    double err = max_error();
    while (err > tol) {
        if (subdivisions >= options.max_subdivisions) {
            std::ostringstream os;
            os << "integrate_spectrum: no convergence after " << subdivisions
               << " subdivisions, error estimate " << err * inv2pi;
            throw NumericError(os.str(), subdivisions, err * inv2pi);
        }
        Segment* worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst->a + worst->b);
        if (!(mid > worst->a && mid < worst->b)) {
            throw NumericError("integrate_spectrum: interval underflow", subdivisions, err * inv2pi);
        }
        auto left = std::make_unique<Segment>(integrate_segment(g, worst->a, mid));
        auto right = std::make_unique<Segment>(integrate_segment(g, mid, worst->b));
        total -= worst->value;
        total_error -= worst->error;
        total += left->value;
        total += right->value;
        total_error += left->error;
        total_error += right->error;
        queue.push(left.get());
        queue.push(right.get());
        store.push_back(std::move(left));
        store.push_back(std::move(right));
        ++subdivisions;
        // Periodically rebuild the running sums to limit drift from cancellation.
        if (subdivisions % 64 == 0) {
            total = CMatrix(total.rows(), total.cols());
            total_error = CMatrix(total_error.rows(), total_error.cols());
            std::vector<Segment*> live;
            while (!queue.empty()) {
                live.push_back(queue.top());
                queue.pop();
            }
            for (Segment* s : live) {
                total += s->value;
                total_error += s->error;
                queue.push(s);
            }
        }
        err = max_error();
    }

    SpectrumIntegral out;
    total *= inv2pi;
    out.value = std::move(total);
    out.error_estimate = err * inv2pi;
    out.evaluations = g.evaluations;
    return out;
}

}  // namespace ccrb
