#include "metriclat/cli.hpp"

int main(int argc, char** argv) { return metriclat::cli::run(argc, argv); }
