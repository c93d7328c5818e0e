// Vertex classes of a small scenario, cross-checked against a plain double
// description of the whole polytope.

#include <ensbox.hpp>

#include <iostream>

using namespace ensbox;

int main() {
    Scenario s(2, 3, 3, 2);
    auto summary = enumerate_vertex_classes(s);
    for (const auto& c : summary.classes) {
        std::cout << (c.local ? "local" : "nonlocal") << ", degree " << c.degree << ", orbit "
                  << relabeling_orbit(c.representative).size() << "\n"
                  << to_text(c.representative);
    }
    auto vertices = enumerate_vertices(s);
    std::cout << vertices.size() << " vertices, oracle agrees: "
              << (vertices == full_polytope_vertices(s)) << "\n";
}
