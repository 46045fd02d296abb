#include "cli.hpp"

int main(int argc, char** argv) { return qnm::cli::main(argc, argv); }
