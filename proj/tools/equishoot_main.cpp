#include <iostream>
#include <string>
#include <vector>

#include "equishoot/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const equishoot::ParseResult pr = equishoot::parse_config(args);
        if (pr.help_requested) {
            std::cout << pr.help_text;
            return 0;
        }
        return equishoot::run(pr.config);
    } catch (const equishoot::ParseError& e) {
        std::cerr << "ParseError: " << e.what() << '\n';
        return 1;
    }
}
