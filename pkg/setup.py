import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="fronthaullib",
    version="0.1.0",
    author="fronthaullib contributors",
    description="Sequential fronthaul and limited AP memory in cell-free massive MIMO, simulated in Python 3",
    license='ISC',
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=['tests']),
    include_package_data=True,
    package_data={'fronthaullib': ['assets/*.j2', 'assets/presets/*.yaml']},
    install_requires=[
        "oyaml",
        "jinja2==3.0.1",
        "pyyaml",
        "numpy",
        "scipy",
    ],
    entry_points={
        'console_scripts': [
            'fronthaul=fronthaullib.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Programming Language :: Python :: 3.9',
        'Topic :: Scientific/Engineering',
    ],
    python_requires='>=3.9',
)
