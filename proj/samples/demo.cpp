// SPDX-License-Identifier: Apache-2.0
// Length of a small generating set and a rank-one witness for it.

#include <iostream>

#include "wordlen/wordlen.hpp"

int main() {
    using namespace wordlen;
    const Field F(3);
    // Shift plus a corner unit: a pair of length 2n - 2.
    const std::vector<Mat> s{
        Mat::from_ints(F, {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}),
        Mat::from_ints(F, {{0, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}),
    };
    const auto f = span_filtration(s);
    std::cout << "dims:";
    for (auto d : f.report.dims) std::cout << ' ' << d;
    std::cout << "\nlength " << f.report.length << " (bound " << theorem_bound(4) << ")\n";

    const auto res = rank_one_pipeline(s);
    std::cout << "rank-one witness at word length " << res.witness.lambda << ":\n" << res.witness.h.to_string() << "\n";
    std::cout << to_json(res).dump(2) << "\n";
}
