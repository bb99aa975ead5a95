#include "wavechannel/cli_io.hpp"

int main(int argc, char** argv) { return wavechannel::cli_main(argc, argv); }
