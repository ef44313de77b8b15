#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>

int main(int argc, char** argv) {
    // Output-directory override must not leak into config round-trip tests.
    unsetenv("ESC_LAB_OUT");
    doctest::Context context(argc, argv);
    return context.run();
}
