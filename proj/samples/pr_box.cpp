// The PR box: a vertex of the no-signaling polytope that one bit of
// communication from Alice to Bob reproduces.

#include <ensbox.hpp>

#include <iostream>

using namespace ensbox;

int main() {
    Behavior pr = pr_box();
    std::cout << to_text(pr);
    std::cout << "valid: " << validate(pr).ok() << "\n";
    std::cout << "extremal: " << is_extremal(pr) << "\n";

    auto local = local_deterministic_boxes(pr.scenario());
    auto r = membership(pr, local);
    std::cout << "local: " << r.inside() << "\n";
    if (r.functional)
        std::cout << "separating functional, bound " << format_rational(r.bound) << ":\n"
                  << to_text(*r.functional);
    std::cout << "visibility against local: "
              << format_rational(critical_visibility(pr, local)) << "\n";

    auto dits = min_dit(pr, 3);
    std::cout << "smallest message alphabet: " << *dits.min_dit << "\n";
}
