import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name='lifelike-crypt',
    description='Stream cipher on Life-Like cellular automata with chaos metrics and '
                'randomness analysis tools',
    version='0.1.0',  # Also pyproject.toml
    python_requires='>=3.7',
    packages=setuptools.find_packages(exclude=['tests', 'tests.*', 'docs', 'githooks', 'install']),
    package_data={'lifelike_crypt': ['report_template.tpl']},
    long_description=long_description,
    long_description_content_type='text/markdown',
    entry_points={"console_scripts": ["lifelike_crypt=lifelike_crypt.cli:main"]},
    keywords=["cellular automata", "game of life", "stream cipher", "prng", "lyapunov",
              "logistic map", "ent"],
    classifiers=[
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: Apache Software License',
        'Intended Audience :: Science/Research',
        'Topic :: Security :: Cryptography',
        'Topic :: Scientific/Engineering :: Mathematics'
    ],
    # Also tox.ini
    install_requires=[
        'click>=7.0',
        'jinja2',
        'wrapt',
        'numpy>=1.17',
        'scipy>=1.4'
    ],
)
