"""Build script: compiles the optional Cython search kernel.

The package is fully functional without the extension; escape3x3.kernel
falls back to the pure-Python twin when the compiled module is missing.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "escape3x3._kernel_cy",
                ["src/escape3x3/_kernel_cy.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"escape3x3: skipping Cython kernel build ({exc}); pure-Python fallback will be used")

setup(ext_modules=ext_modules)
