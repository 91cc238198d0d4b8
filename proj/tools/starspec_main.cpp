#include <string>
#include <vector>

#include <starspec/starspec.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return starspec::run_cli(args);
}
