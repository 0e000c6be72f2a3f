// Build the order-8 Sylvester matrix, turn it into a seven-colour pattern and evaluate it.
#include "erlab/hadamard.hpp"
#include "erlab/qstar.hpp"

#include <iostream>

using namespace erlab;

int main()
{
    auto h = normalize(sylvester(3));
    std::cout << write_matrix(h) << '\n';

    auto d = to_biclique_decomposition(h);
    for (size_t c = 0; c < d.blocks.size(); ++c) {
        std::cout << "colour " << c + 1 << ": {";
        for (int i = 0; i < 8; ++i)
            if ((d.blocks[c].a >> i) & 1u) std::cout << ' ' << i + 1;
        std::cout << " } vs {";
        for (int i = 0; i < 8; ++i)
            if ((d.blocks[c].b >> i) & 1u) std::cout << ' ' << i + 1;
        std::cout << " }\n";
    }

    auto p = pattern_from_columns(h, {1, 1, 1, 1, 1, 1, 1});
    auto k = parse_kvector("3;7");
    std::cout << "\nvalid for (3;7): " << std::boolalpha << validate_pattern(p, k, 2) << '\n';
    std::cout << "q at uniform weights: " << q_value(p, uniform_weights(8)).str() << '\n';

    auto w = optimize_weights(p);
    std::cout << "optimized q: " << (w.value_exact ? w.value_exact->str() : std::to_string(w.value)) << '\n';
}
