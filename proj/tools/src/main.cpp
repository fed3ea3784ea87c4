#include "magnls/cli.hpp"

int main(int argc, char** argv) { return magnls::cli::run(argc, argv); }
