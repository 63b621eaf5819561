"""
Build geo4.
"""
from setuptools import setup, find_packages


with open('README.rst', encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='geo4',
    setup_requires=['setuptools_scm'],  # Support pip versions that don't know about pyproject.toml
    use_scm_version={'write_to': 'src/geo4/_version.py', 'fallback_version': '0.1.dev0'},
    description='exact geography of simply connected spin symplectic 4-manifolds',
    long_description=long_description,
    long_description_content_type='text/x-rst',
    license='MIT',
    package_dir={'': 'src'},
    packages=find_packages('src'),
    entry_points={'console_scripts': ['geo4 = geo4.__main__:main_cli']},
    install_requires=[
        'xopen>=1.1.0',
        'sympy>=1.9',
        'pydantic>=2.0',
        'matplotlib>=3.5',
    ],
    extras_require={
        'dev': ['pytest', 'pytest-timeout', 'sphinx'],
    },
    python_requires='>=3.8',
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Natural Language :: English",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics"
    ],
)
