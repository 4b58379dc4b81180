#include "slicekit/cli.hpp"

int main(int argc, char** argv) { return slicekit::cli_main(argc, argv); }
