#include "gpx/parallel.hpp"

namespace gpx {

unsigned resolve_workers(unsigned workers) {
    if (workers == 0) {
        workers = std::thread::hardware_concurrency();
    }
    return std::max(workers, 1u);
}

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) {
            s += x;
        }
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace gpx
