#include "pfpois/cli.hpp"

int main(int argc, char** argv) { return pfpois::cli::main(argc, argv); }
