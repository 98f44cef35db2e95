// Normal forms and lengths of a few small braids.

#include <iostream>

#include <braidlen/length.hpp>

using namespace braidlen;

int main() {
    const int N = 4;
    for (const char* text : {"1", "-1", "1 2 1", "1 2 1 2 1 2", "1 -1", "2 -1 3 3 -2", "-1 -2 -3 -1 -2 -1"}) {
        const auto nf = normal_form(parse_word(text, N));
        std::cout << text << "\n  " << format_normal_form(nf) << "\n  rg length " << rg_length(nf) << ", naive "
                  << naive_garside_length(nf) << "\n";
    }

    // Delta^2 is central
    const auto d = normal_form(parse_word("1 2 1 3 2 1", N));
    const auto d2 = gnf_multiply(d, d);
    const auto a = normal_form(parse_word("1 -2 3", N));
    std::cout << "Delta^2 commutes with 1 -2 3: " << std::boolalpha
              << (gnf_multiply(d2, a) == gnf_multiply(a, d2)) << "\n";
}
