#include "ppsim/cli.hpp"

int main(int argc, char** argv) {
    return ppsim::cli::run(argc, argv);
}
