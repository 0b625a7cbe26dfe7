#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fitpa/synth.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace fitpa;

namespace {

std::string dump(const TemporalNetwork& net) {
  std::ostringstream out;
  write_network(out, net);
  return out.str();
}

}  // namespace

TEST_CASE("a fixed seed reproduces the network byte for byte") {
  GeneratorConfig c;
  c.n_steps = 300;
  c.edges_per_newcomer = 2;
  c.fitness = FitnessDistribution::log_normal(0.0, 0.5);
  c.seed = 42;
  const auto a = generate(c), b = generate(c);
  CHECK(dump(a.network) == dump(b.network));
  CHECK(a.truth.fitness == b.truth.fitness);
  c.seed = 43;
  CHECK(dump(generate(c).network) != dump(a.network));
}

TEST_CASE("step streams are independent of the steps before them") {
  StepRng a(7, 12), b(7, 12), c(7, 13);
  CHECK(a.next() == b.next());
  CHECK(a.next() != c.next());
  StepRng u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("splitmix64 reference values") {
  // First outputs of the reference generator seeded with 0 and 1234567.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(1234567) == 6457827717110365317ULL);
}

TEST_CASE("sampler totals and draws survive growth") {
  AttachmentSampler s;
  std::vector<double> w;
  std::mt19937_64 g(3);
  for (std::size_t n = 1; n <= 70; ++n) {
    s.resize(n);
    w.resize(n, 0.0);
    const std::size_t i = g() % n;
    w[i] = 1.0 + static_cast<double>(g() % 5);
    s.set_weight(i, w[i]);
    w[n - 1] = 0.5;
    s.set_weight(n - 1, 0.5);
    double total = 0.0;
    for (double x : w) total += x;
    CHECK(s.total() == doctest::Approx(total).epsilon(1e-12));
    // Inverse CDF by linear scan.
    for (double u : {0.0, 0.13, 0.5, 0.77, 0.999}) {
      double acc = 0.0;
      std::size_t expect = 0;
      for (; expect < n; ++expect) {
        acc += w[expect];
        if (u * total < acc) break;
      }
      CHECK(s.draw(u) == std::min(expect, n - 1));
    }
  }
  CHECK_THROWS(s.set_weight(0, -1.0));
  CHECK_THROWS(s.resize(3));
}

TEST_CASE("frozen-state replay matches attachment probabilities") {
  GeneratorConfig c;
  c.n_steps = 20;
  c.kernel = Kernel::power(0.8);
  c.fitness = FitnessDistribution::two_point(1.0, 3.0, 0.5);
  c.seed = 5;
  const auto syn = generate(c);
  const auto& net = syn.network;
  const Time t = net.last_time() + 1;
  AttachmentSampler s;
  std::vector<double> p(net.node_count());
  for (NodeId i = 0; i < net.node_count(); ++i) {
    s.resize(i + 1);
    p[i] = c.kernel(net.degree_at(i, t)) * syn.truth.fitness[i];
    s.set_weight(i, p[i]);
  }
  double z = 0.0;
  for (double x : p) z += x;
  const int draws = 100000;
  std::vector<int> hits(p.size(), 0);
  StepRng rng(99, 0);
  for (int k = 0; k < draws; ++k) ++hits[s.draw(rng.uniform())];
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = p[i] / z;
    const double se = std::sqrt(draws * q * (1.0 - q));
    CHECK(std::abs(hits[i] - draws * q) <= 3.0 * se);
  }
}

TEST_CASE("kernel forms") {
  const auto pw = Kernel::power(0.5);
  CHECK(pw(0) == 1.0);
  CHECK(pw(4) == 2.0);
  const auto tb = Kernel::table({1.0, 2.0, 5.0});
  CHECK(tb(1) == 2.0);
  CHECK(tb(10) == 5.0);
  CHECK_THROWS(Kernel::table({}));
  CHECK_THROWS(Kernel::table({1.0, 0.0}));
}

TEST_CASE("fitness distributions") {
  StepRng rng(1, 1);
  const auto tp = FitnessDistribution::two_point(1.0, 3.0, 0.25);
  int high = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) high += tp.draw(rng) == 3.0;
  CHECK(std::abs(high - n * 0.25) <= 4.0 * std::sqrt(n * 0.25 * 0.75));

  const auto ln = FitnessDistribution::log_normal(0.0, 0.25);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(ln.draw(rng));
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) <= 4.0 * 0.25 / std::sqrt(double(n)));
  CHECK(std::sqrt(sq / n) == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("generator shape") {
  GeneratorConfig c;
  c.n_steps = 50;
  c.newcomers_per_step = 2;
  c.edges_per_newcomer = 3;
  const auto syn = generate(c);
  CHECK(syn.network.node_count() == 2 + 50 * 2);
  CHECK(syn.network.event_count() == 1 + 50 * 2 * 3);
  CHECK(syn.truth.fitness.size() == syn.network.node_count());
  // Targets always predate the step.
  for (const auto& e : syn.network.events()) {
    if (e.time > 0) CHECK(syn.network.node(e.target).birth_time < e.time);
  }
  c.n_steps = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("strong superlinear attachment concentrates edges on one node") {
  GeneratorConfig c;
  c.n_steps = 2000;
  c.kernel = Kernel::power(2.0);
  c.seed = 8;
  const auto syn = generate(c);
  const Time end = syn.network.last_time() + 1;
  std::int64_t top = 0;
  for (NodeId i = 0; i < syn.network.node_count(); ++i) top = std::max(top, syn.network.degree_at(i, end));
  CHECK(double(top) > 0.9 * double(syn.network.event_count()));
}

TEST_CASE("under linear attachment older nodes end up with more edges") {
  GeneratorConfig c;
  c.n_steps = 3000;
  c.edges_per_newcomer = 2;
  c.seed = 4;
  const auto syn = generate(c);
  const Time end = syn.network.last_time() + 1;
  // Ids follow birth order; compare the oldest and youngest tenth.
  const std::size_t n = syn.network.node_count(), tenth = n / 10;
  double old_sum = 0.0, young_sum = 0.0;
  for (std::size_t i = 0; i < tenth; ++i) {
    old_sum += double(syn.network.degree_at(NodeId(i), end));
    young_sum += double(syn.network.degree_at(NodeId(n - 1 - i), end));
  }
  CHECK(old_sum > 5.0 * young_sum);
}

TEST_CASE("degree distribution and truth JSON") {
  GeneratorConfig c;
  c.n_steps = 100;
  c.kernel = Kernel::table({1.0, 2.0});
  c.fitness = FitnessDistribution::two_point(1.0, 2.0, 0.5);
  const auto syn = generate(c);
  const auto dist = empirical_degree_distribution(syn.network);
  std::size_t nodes = 0, edges = 0;
  for (const auto& [k, n] : dist) {
    nodes += n;
    edges += static_cast<std::size_t>(k) * n;
  }
  CHECK(nodes == syn.network.selectable_count());
  CHECK(edges == syn.network.event_count());
  const auto doc = nlohmann::json::parse(ground_truth_to_json(syn.truth));
  CHECK(doc["kernel"]["type"] == "table");
  CHECK(doc["fitness"].size() == syn.network.node_count());
}
