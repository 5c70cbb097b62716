#pragma once

#include "dglet/temporal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dglet {

enum class Arrival { linear, quadratic, exponential };
enum class Variant { evolution, preferential_attachment };

// Growth model for one synthetic network. Simulation runs in discrete
// steps t = 1,2,...; the node count tracks the arrival curve N(t) until
// target_nodes is reached. A small clique core (5 nodes, or fewer for tiny
// targets) exists at t = 0 so degree-proportional choices are well defined;
// its edges are internal state, not events.
struct ModelSpec {
    Arrival arrival = Arrival::linear;
    double arrival_scale = 10.0; // N(t) = scale*t, scale*t^2, scale*base^t
    double arrival_base = 1.1;   // exponential arrivals only
    Variant variant = Variant::evolution;
    double lambda = 0.032; // evolution: lifetime rate
    double alpha = 0.8;    // evolution: gap power-law exponent
    double beta = 0.002;   // evolution: gap cutoff rate, scaled by degree
    int m = 20;            // preferential attachment: edges per arrival
    int target_nodes = 0;
    std::uint64_t seed = 0;
};

// The nine canonical classes: arrivals {linear, quadratic, exponential}
// crossed with {evolution(0.032, 0.8, 0.002), evolution(0.02, 0.9, 0.004),
// preferential_attachment(20)}. cls = 3 * arrival + dynamics.
ModelSpec class_spec(int cls, int target_nodes, std::uint64_t seed);
std::string class_name(int cls); // e.g. "linear-evo1", "exponential-pa"

// Deterministic for a fixed spec (byte-identical event lists).
TemporalNetwork generate(const ModelSpec &spec);

struct SuiteInstance {
    ModelSpec spec;
    TemporalNetwork network;
    int label = 0; // class index 0..8
    int size = 0;
    std::uint64_t seed = 0;
};

// All nine classes, instances_per_class times per size. Instance seeds are
// derived from `seed`, so the suite is identical for any thread count.
std::vector<SuiteInstance> generate_suite(int instances_per_class, const std::vector<int> &sizes,
                                          std::uint64_t seed, int threads = 1);

} // namespace dglet
