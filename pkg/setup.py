from setuptools import setup, find_packages
from os import path

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='pyhugeobject',
    packages=find_packages(exclude=['contrib', 'docs', 'tests']),
    package_data={'pyhugeobject': ['data/*.txt']},
    version='0.1.0',
    description='Property testing of distributions over huge binary vectors',
    long_description=long_description,
    keywords=['property testing', 'distribution testing', 'huge objects',
              'earth mover distance'],
    license='MIT License',
    install_requires=[
        'numpy',
        'scipy',
        'networkx',
        'retrying',
        'galois',
    ],
    entry_points={
        'console_scripts': [
            'pyhugeobject=pyhugeobject.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
