// Two copies of a full-output box violate local orthogonality: look for a
// clique of pairwise exclusive events whose probabilities sum past 1.

#include <ensbox.hpp>

#include <iostream>
#include <string>

using namespace ensbox;

int main(int argc, char** argv) {
    std::string name = argc > 1 ? argv[1] : "box2";
    auto p = named_fixture(name);
    if (!p) {
        std::cerr << "unknown fixture " << name << "\n";
        return 2;
    }
    auto g = build_exclusivity_graph(*p, 2);
    std::cout << name << ": " << g.size() << " joint events\n";
    auto r = find_violating_clique(g);
    if (!r.witness) {
        std::cout << "no violation\n";
        return 1;
    }
    for (const auto& e : r.witness->events)
        std::cout << format_event(e) << "  " << format_rational(e.weight) << "\n";
    std::cout << "total " << format_rational(r.witness->total_weight) << "\n";

    auto single = find_violating_clique(build_exclusivity_graph(*p, 1));
    std::cout << "one copy, max weight " << format_rational(*single.max_weight) << "\n";
}
