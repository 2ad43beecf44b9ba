#include <exception>
#include <iostream>
#include <vector>

#include "liouville/cli.hpp"
#include "liouville/rational.hpp"

int main(int argc, char** argv) {
    try {
        return liouville::run_cli(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const liouville::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const liouville::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
