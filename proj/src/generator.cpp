#include <algorithm>
#include <cmath>

#include "drcirp/ambiguity.hpp"
#include "drcirp/harness.hpp"

namespace drcirp {

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kEarthRadiusKm = 6371.0;
    constexpr double kDeg = M_PI / 180.0;
    double dlat = (lat2 - lat1) * kDeg, dlon = (lon2 - lon1) * kDeg;
    double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
               std::cos(lat1 * kDeg) * std::cos(lat2 * kDeg) * std::sin(dlon / 2) *
                   std::sin(dlon / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

double sample_mixture_demand(double mu, double sigma, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    double d;
    if (coin(rng) < 0.5) {
        // truncated normal on [max(0, mu-3sigma), mu+3sigma]
        double lo = std::max(0.0, mu - 3.0 * sigma), hi = mu + 3.0 * sigma;
        std::normal_distribution<double> normal(mu, sigma);
        do {
            d = normal(rng);
        } while (d < lo || d > hi);
    } else {
        std::uniform_real_distribution<double> uni(mu - 2.0 * sigma, mu + 2.0 * sigma);
        d = uni(rng);
    }
    d = std::floor(d + 0.5);  // round half up, floor at zero
    return std::max(0.0, d);
}

GeneratedInstance generate_instance(const GeneratorConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    GeneratedInstance out;
    Instance& inst = out.instance;
    const int N = cfg.n_retailers;
    const int T = cfg.cycle_len;

    inst.n_retailers = N;
    inst.cycle_len = T;
    inst.n_vehicles = cfg.n_vehicles;
    inst.capacity = cfg.capacity;
    inst.max_tour_len = cfg.max_tour_len;
    inst.hold_cost = cfg.hold_cost;
    inst.backorder_cost = cfg.backorder_cost;
    inst.trans_cost = cfg.trans_cost;
    inst.vehicle_cost = cfg.vehicle_cost;
    inst.eps_capacity = cfg.eps1;
    inst.eps_overshoot = cfg.eps2;

    // Coordinates and haversine distances; node 0 is the warehouse.
    std::uniform_real_distribution<double> lat_d(50.7, 53.4), lon_d(3.5, 7.1);
    std::vector<std::pair<double, double>> coords;
    for (int v = 0; v <= N; ++v) coords.push_back({lat_d(rng), lon_d(rng)});
    inst.dist.assign(N + 1, std::vector<double>(N + 1, 0.0));
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j)
            if (i != j)
                inst.dist[i][j] = haversine_km(coords[i].first, coords[i].second,
                                               coords[j].first, coords[j].second);

    // Ground-truth moments per retailer-period.
    std::uniform_real_distribution<double> mean_d(cfg.mean_lo, cfg.mean_hi);
    std::uniform_real_distribution<double> mad_d(cfg.mad_lo, cfg.mad_hi);
    out.true_mean.assign(N, std::vector<double>(T, 0.0));
    out.true_sigma.assign(N, std::vector<double>(T, 0.0));
    for (int i = 0; i < N; ++i) {
        for (int t = 0; t < T; ++t) {
            if (cfg.cycle == CycleType::Stationary && t > 0) {
                out.true_mean[i][t] = out.true_mean[i][0];
                out.true_sigma[i][t] = out.true_sigma[i][0];
            } else {
                out.true_mean[i][t] = mean_d(rng);
                out.true_sigma[i][t] = mad_d(rng);
            }
        }
    }

    // Estimation samples and ambiguity cells.
    inst.ambiguity.assign(N, std::vector<AmbiguityCell>(T));
    for (int i = 0; i < N; ++i) {
        for (int t = 0; t < T; ++t) {
            std::vector<double> samples(cfg.samples);
            for (int k = 0; k < cfg.samples; ++k)
                samples[k] = sample_mixture_demand(out.true_mean[i][t],
                                                   out.true_sigma[i][t], rng);
            inst.ambiguity[i][t] = estimate_ambiguity(samples);
        }
    }

    // Held-out traces respect the cycle structure.
    out.traces.assign(N, std::vector<double>(cfg.test_periods, 0.0));
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < cfg.test_periods; ++k) {
            int t = k % T;
            out.traces[i][k] =
                sample_mixture_demand(out.true_mean[i][t], out.true_sigma[i][t], rng);
        }

    inst.validate();
    return out;
}

}  // namespace drcirp
