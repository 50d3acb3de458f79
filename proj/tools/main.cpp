#include "eyecontact/cli.hpp"

int main(int argc, char** argv) { return eyecontact::cli_main(argc, argv); }
