// Compares the parallel grid kernels against their serial references and
// reports wall times plus result agreement.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "mico/infolab.hpp"

using namespace mico;

namespace {

double time_ms(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

ConvexBodySpec big_body(int n, int d, double half) {
    Vec lo(n + d), hi(n + d);
    for (int i = 0; i < n + d; ++i) {
        lo[i] = -half;
        hi[i] = half;
    }
    Vec c(n + d, 0.25);
    return ConvexBodySpec::intersection(
        {ConvexBodySpec::box(lo, hi), ConvexBodySpec::ball(c, half * 1.2, Norm::Euclidean)});
}

}  // namespace

int main() {
    std::printf("kernel,config,serial_ms,parallel_ms,speedup,agree\n");

    for (int n : {1, 2}) {
        int d = 2;
        ConvexBodySpec body = big_body(n, d, n == 1 ? 60.0 : 14.0);
        double vs = 0.0, vp = 0.0;
        double ts = time_ms([&] { vs = mixed_integer_volume_serial(body, n, d); });
        double tp = time_ms([&] { vp = mixed_integer_volume(body, n, d); });
        std::printf("volume,n=%d d=%d,%.2f,%.2f,%.2f,%d\n", n, d, ts, tp, ts / tp,
                    std::fabs(vs - vp) < 1e-9 * (1.0 + std::fabs(vs)));
    }

    for (int grid : {5, 7}) {
        ConvexBodySpec body = big_body(1, 2, 2.0);
        CenterpointEstimate es, ep;
        double ts = time_ms([&] { es = approx_centerpoint_serial(body, 1, 2, grid); });
        double tp = time_ms([&] { ep = approx_centerpoint(body, 1, 2, grid); });
        bool agree = std::fabs(es.h - ep.h) < 1e-9 * (1.0 + std::fabs(es.h));
        std::printf("centerpoint,grid=%d,%.2f,%.2f,%.2f,%d\n", grid, ts, tp, ts / tp, agree);
    }
    return 0;
}
