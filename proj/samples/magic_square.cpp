// Magic-square correlations: quantum realization, Bell value, and their
// split into two extremal boxes.

#include <ensbox.hpp>

#include <iostream>

using namespace ensbox;

int main() {
    Behavior p = quantum_realization();
    std::cout << "realization matches table: " << (p == magic_square_behavior()) << "\n";
    std::cout << "Bell value: " << format_rational(magic_square_functional().value(p)) << " of 9\n";

    auto cert = extremality_certificate(p);
    std::cout << "extremal: " << cert.extremal() << ", steps " << format_rational(cert.alpha)
              << " / " << format_rational(cert.beta) << "\n";

    auto d = decompose_into_vertices(p);
    verify_decomposition(p, d);
    auto [p1, p2] = magic_square_p1_p2();
    Behavior c1 = canonical_form(p1), c2 = canonical_form(p2);
    for (const auto& t : d.terms) {
        Behavior c = canonical_form(t.vertex);
        std::cout << format_rational(t.weight) << "  "
                  << (c == c1 ? "class of p1" : c == c2 ? "class of p2" : "other class") << "\n";
    }
    std::cout << decomposition_to_json(d).dump().size() << " bytes of JSON\n";
}
